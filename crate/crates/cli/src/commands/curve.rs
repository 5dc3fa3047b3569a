//! `analyze-curve`: Frenet summary, vertices, spherical points, conformal
//! invariants and the corollary check of a closed space curve.

use std::f64::consts::TAU;

use desitter::conformal::{
    conformal_invariants, corollary_check, detect_spherical_points, drill_check,
    omega_via_sphere_jet, osculating_canal, CorollaryTolerances, CorollaryVerdict, TorsionVariant,
    SPHERICAL_TOL, VERTEX_TOL,
};
use desitter::curves::{detect_vertices, frenet_apparatus};
use serde::Serialize;
use serde_json::json;

use crate::config::Options;
use crate::error::CliError;
use crate::generators::space_curve;
use crate::report::{emit, envelope, to_value, write_csv, Measure, Outcome, Status};

/// Relative accuracy requested from the adaptive quadratures.
const QUAD_TOL: f64 = 1e-12;
/// Agreement of the ω routes and light-likeness of `k_g`.
const ROUTE_TOL: f64 = 1e-6;

#[derive(Serialize)]
struct Row {
    t: f64,
    arc_length: f64,
    k: f64,
    tau: f64,
    dt_du: f64,
    conformal_torsion: f64,
    omega: f64,
    omega_sphere_jet: Option<f64>,
}

fn range(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
        (a.min(x), b.max(x))
    })
}

pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let (x, source) = space_curve(opts)?;
    let tol = opts.tol_or(CorollaryTolerances::default().bound)?;
    let frenet = frenet_apparatus(&x)?;
    let vr = detect_vertices(&frenet, VERTEX_TOL);
    if !vr.vertex_free {
        let e: CliError = desitter::GeomError::Vertex {
            t: vr.vertices.first().copied().unwrap_or(0.0),
            margin: vr.margin,
        }
        .into();
        return Err(e.with_detail(json!({
            "source": source,
            "margin": vr.margin,
            "tol": vr.tol,
            "degenerate": vr.degenerate,
            "vertex_count": vr.vertices.len(),
            "first_vertices": vr.vertices.iter().take(8).collect::<Vec<_>>(),
        })));
    }
    let inv = conformal_invariants(&x)?;
    let oc = osculating_canal(&x)?;
    let sp = detect_spherical_points(&oc, SPHERICAL_TOL);
    let drill = drill_check(&oc, ROUTE_TOL, ROUTE_TOL);
    let jet_route = omega_via_sphere_jet(&oc);
    let route_dev = inv
        .points
        .iter()
        .zip(&jet_route)
        .filter_map(|(p, w)| w.map(|w| (w - p.omega).abs() / (1.0 + p.omega)))
        .fold(0.0, f64::max);
    let cor = corollary_check(
        &x,
        CorollaryTolerances {
            bound: tol,
            ..Default::default()
        },
        TorsionVariant::Standard,
    );
    let ctol = CorollaryTolerances::default();

    let (k_min, k_max) = range(frenet.points.iter().map(|p| p.k));
    let (tau_min, tau_max) = range(frenet.points.iter().map(|p| p.tau));
    let route = Measure::at_most(route_dev, ROUTE_TOL);
    let failed = !drill.pass || cor.verdict == CorollaryVerdict::Fail || route.failed();
    let status = if failed {
        Status::VerificationFailed
    } else {
        Status::Ok
    };

    let mut result = json!({
        "source": source,
        "curve": {
            "samples": x.len(),
            "period": x.period(),
            "spectral_tail": Measure::at_most(x.spectral_tail(), 1e-10),
        },
        "frenet": {
            "length": Measure::info(frenet.total_length, 1e-13),
            "k_min": k_min,
            "k_max": k_max,
            "tau_min": tau_min,
            "tau_max": tau_max,
        },
        "vertices": {
            "vertex_free": vr.vertex_free,
            "margin": Measure::at_least(vr.margin, vr.tol, 0.0),
        },
        "spherical_points": {
            "count": sp.points.len(),
            "points": sp.points.iter().map(|p| json!({
                "t": p.t,
                "relative_speed": Measure::at_most(p.relative_speed, sp.tol),
                "contact_order": p.contact_order,
            })).collect::<Vec<_>>(),
        },
        "conformal": {
            "total_conformal_length": Measure::info(inv.total_conformal_length, QUAD_TOL),
            "int_t_dt": Measure::info(inv.total_t, QUAD_TOL),
            "int_abs_t_dt": Measure::info(inv.total_abs_t, QUAD_TOL),
            "total_torsion": Measure::info(inv.total_torsion, QUAD_TOL),
            "int_t_dt_trapezoid": Measure::info(inv.total_t_trapezoid, QUAD_TOL),
        },
        "omega_routes": { "max_relative_deviation": route },
        "drill_check": {
            "pass": drill.pass,
            "tested_points": drill.tested_points,
            "excluded_points": drill.excluded_points,
            "max_light_margin": Measure::at_most(drill.max_light_margin, drill.tol),
            "max_angle": Measure::at_most(drill.max_angle, drill.angle_tol),
        },
        "corollary": {
            "verdict": cor.verdict,
            "omega_total": cor.omega_total.map(|v| Measure::at_least(v, TAU, tol)),
            "sign_residual": cor.t_total.zip(cor.omega_total)
                .map(|(t, w)| Measure::at_most((t.abs() - w).abs(), ctol.sign)),
            "congruence_residual": cor.congruence_residual
                .map(|r| Measure::at_most(r, ctol.congruence)),
            "winding": cor.winding,
            "spherical_points": cor.spherical_points,
            "reason": cor.reason,
        },
    });
    if opts.per_sample {
        result["per_sample"] = to_value(&inv);
    }
    if let Some(path) = &opts.out_csv {
        let rows: Vec<Row> = frenet
            .points
            .iter()
            .enumerate()
            .map(|(j, p)| Row {
                t: p.t,
                arc_length: frenet.arc_length[j],
                k: p.k,
                tau: p.tau,
                dt_du: inv.points[j].dt_du,
                conformal_torsion: inv.points[j].torsion,
                omega: inv.points[j].omega,
                omega_sphere_jet: jet_route[j],
            })
            .collect();
        write_csv(path, &rows)?;
    }
    emit(&envelope("analyze-curve", status, opts, result), opts)?;
    Ok(Outcome { status })
}
