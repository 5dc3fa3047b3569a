//! Osculating-sphere canals of space curves and their conformal invariants.

pub mod invariants;
pub mod osculating;
pub mod tube;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use invariants::{
    conformal_invariants, conformal_invariants_with, conformal_point, corollary_check, mod_two_pi,
    ConformalInvariants, ConformalPoint, CorollaryReport, CorollaryTolerances, CorollaryVerdict,
    TorsionVariant,
};
pub use osculating::{
    detect_spherical_points, drill_check, drill_check_path, osculating_canal,
    osculating_canal_unchecked, spherical_indicator, DrillReport, OsculatingCanal, OsculatingPath,
    SphericalPoint, SphericalReport,
};
pub use tube::{curvature_tube_mesh, singular_locus_text, CurvatureTube};

use crate::curves::{
    detect_vertices, frenet_apparatus, frenet_at, osculating_sphere, PeriodicCurve, VertexReport,
};
use crate::error::{GeomError, Result};
use crate::lorentz::LorentzTransform;
use crate::spheremodel::{inverse_stereographic, stereographic_to_r3, S3Point};

/// Relative vertex tolerance on `k'² + k²τ²`.
pub const VERTEX_TOL: f64 = 1e-6;
/// Relative tolerance on `‖σ'‖∞` for spherical points.
pub const SPHERICAL_TOL: f64 = 1e-6;

/// Central difference weights of order 8 for the first derivative.
const FD8: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

fn fd8<F: Fn(f64) -> Result<[f64; 4]>>(f: F, t: f64, h: f64) -> Result<[f64; 4]> {
    let mut d = [0.0; 4];
    for (i, w) in FD8.iter().enumerate() {
        let step = (i + 1) as f64 * h;
        let (a, b) = (f(t + step)?, f(t - step)?);
        for c in 0..4 {
            d[c] += w * (a[c] - b[c]);
        }
    }
    Ok(d.map(|x| x / h))
}

/// `√(|m'|² − r'²)/r` per unit arc length from euclidean osculating spheres.
///
/// `None` at samples where `|τ| < exclusion·max|τ|` (the euclidean centre
/// formula breaks down near torsion zeros).
pub fn omega_via_spheres(x: &PeriodicCurve, exclusion: f64) -> Result<Vec<Option<f64>>> {
    let frenet = frenet_apparatus(x)?;
    let vr = detect_vertices(&frenet, VERTEX_TOL);
    if !vr.vertex_free {
        return Err(GeomError::Vertex {
            t: vr.vertices.first().copied().unwrap_or(0.0),
            margin: vr.margin,
        });
    }
    let max_tau = frenet
        .points
        .iter()
        .map(|p| p.tau.abs())
        .fold(0.0, f64::max);
    let h = 0.25 * x.period() / x.len() as f64;
    let sphere = |t: f64| -> Result<[f64; 4]> {
        let s = osculating_sphere(x, t, 1e-12)?;
        Ok([s.center[0], s.center[1], s.center[2], s.radius])
    };
    frenet
        .points
        .iter()
        .map(|p| {
            if p.tau.abs() < exclusion * max_tau {
                return Ok(None);
            }
            let d = fd8(sphere, p.t, h)?;
            let r = sphere(p.t)?[3];
            let m2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            Ok(Some((m2 - d[3] * d[3]).max(0.0).sqrt() / r / p.speed))
        })
        .collect()
}

/// `√(|m'|² − r'²)/r` per unit arc length, with `m, r` read off the unit
/// osculating-sphere jet by `m = σ₁₂₃/(σ₅−σ₄)`, `r = 1/|σ₅−σ₄|`.
///
/// `None` where the sphere is within `1e-8` (relative) of a plane.
pub fn omega_via_sphere_jet(oc: &OsculatingCanal) -> Vec<Option<f64>> {
    let x = oc.curve();
    x.params()
        .into_iter()
        .map(|t| {
            let [s, ds, _] = oc.sigma_jet(t);
            let (d, dd) = (s[4] - s[3], ds[4] - ds[3]);
            if d.abs() <= 1e-8 * s.norm_inf() {
                return None;
            }
            let m2: f64 = (0..3)
                .map(|i| (ds[i] / d - s[i] * dd / (d * d)).powi(2))
                .sum();
            let dr = dd / (d * d);
            let speed = x.derivative(t, 1).iter().map(|c| c * c).sum::<f64>().sqrt();
            Some((m2 - dr * dr).max(0.0).sqrt() * d.abs() / speed)
        })
        .collect()
}

/// Curve winding `p` times around the axis and `q` times around the core of
/// the torus with radii `R > r`, meeting the meridian circles at constant angle.
///
/// With `K = √((R+r)/(R−r))` and `α = qs`, the meridian angle is
/// `ψ = α + 2 atan((K−1) sin α / ((1+K) + (1−K) cos α))` and the longitude is `ps`.
pub fn constant_angle_curve(
    big_r: f64,
    small_r: f64,
    p: i64,
    q: i64,
    n: usize,
) -> Result<PeriodicCurve> {
    if !(big_r > small_r && small_r > 0.0) {
        return Err(GeomError::Precondition(format!(
            "need R > r > 0, got R={big_r}, r={small_r}"
        )));
    }
    if gcd(p.unsigned_abs(), q.unsigned_abs()) != 1 {
        return Err(GeomError::Precondition(format!("gcd({p}, {q}) must be 1")));
    }
    let k = ((big_r + small_r) / (big_r - small_r)).sqrt();
    PeriodicCurve::from_fn(n, TAU, |s| {
        let a = q as f64 * s;
        let psi = a + 2.0 * ((k - 1.0) * a.sin()).atan2((1.0 + k) + (1.0 - k) * a.cos());
        let phi = p as f64 * s;
        let rho = big_r + small_r * psi.cos();
        vec![rho * phi.cos(), rho * phi.sin(), small_r * psi.sin()]
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantAngleReport {
    pub big_r: f64,
    pub small_r: f64,
    pub p: i64,
    pub q: i64,
    pub vertices: Option<VertexReport>,
    pub spherical_points: Option<usize>,
    /// Both detectors came back empty.
    pub usable: bool,
    pub error: Option<String>,
}

/// Generates [`constant_angle_curve`] and reports its vertices and spherical points.
pub fn constant_angle_cyclide_curve(
    big_r: f64,
    small_r: f64,
    p: i64,
    q: i64,
    n: usize,
) -> Result<(PeriodicCurve, ConstantAngleReport)> {
    let curve = constant_angle_curve(big_r, small_r, p, q, n)?;
    let mut report = ConstantAngleReport {
        big_r,
        small_r,
        p,
        q,
        vertices: None,
        spherical_points: None,
        usable: false,
        error: None,
    };
    let frenet = match frenet_apparatus(&curve) {
        Ok(f) => f,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok((curve, report));
        }
    };
    let vr = detect_vertices(&frenet, VERTEX_TOL);
    if vr.degenerate {
        return Err(GeomError::Vertex {
            t: 0.0,
            margin: vr.margin,
        });
    }
    let vertex_free = vr.vertex_free;
    report.vertices = Some(vr);
    if vertex_free {
        match osculating_canal(&curve) {
            Ok(oc) => {
                let sp = detect_spherical_points(&oc, SPHERICAL_TOL);
                let count = if sp.all { curve.len() } else { sp.points.len() };
                report.spherical_points = Some(count);
                report.usable = count == 0;
            }
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    Ok((curve, report))
}

/// Applies a Möbius transform to a space curve through its lift to S³,
/// resampling the image on `n` points.
///
/// Fails with [`GeomError::PointAtInfinity`] when an image sample lies within
/// `1e-6` of the pole or beyond `max_radius`.
pub fn mobius_transform_curve(
    x: &PeriodicCurve,
    m: &LorentzTransform,
    n: usize,
    max_radius: f64,
) -> Result<PeriodicCurve> {
    if x.dim() != 3 {
        return Err(GeomError::Dimension {
            expected: 3,
            got: x.dim(),
        });
    }
    let rows = (0..n)
        .map(|j| {
            let p = x.eval(x.period() * j as f64 / n as f64);
            let g = m.apply(&inverse_stereographic(&[p[0], p[1], p[2]]).gamma());
            let s = S3Point::from_null(&g)?;
            if s.r4()[3] > 1.0 - 1e-6 {
                return Err(GeomError::PointAtInfinity);
            }
            let y = stereographic_to_r3(&s)
                .point()
                .ok_or(GeomError::PointAtInfinity)?;
            if y.iter().map(|c| c * c).sum::<f64>().sqrt() > max_radius {
                return Err(GeomError::PointAtInfinity);
            }
            Ok(y.to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    PeriodicCurve::from_samples(rows, x.period())
}

/// Conformal torsion and `dt/dt_param` at one parameter.
pub fn conformal_at(x: &PeriodicCurve, t: f64) -> Result<(f64, f64)> {
    let p = frenet_at(x, t)?;
    let c = conformal_point(&p, TorsionVariant::Standard);
    Ok((c.torsion, c.dt_du * p.speed))
}
