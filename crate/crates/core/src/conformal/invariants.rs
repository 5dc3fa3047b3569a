use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::osculating::{detect_spherical_points, osculating_canal};
use super::{SPHERICAL_TOL, VERTEX_TOL};
use crate::curves::{detect_vertices, frenet_apparatus, frenet_at, FrenetPoint, PeriodicCurve};
use crate::error::{GeomError, Result};
use crate::quadrature::{integrate, periodic_trapezoid};

/// Variants of the torsion formula, for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionVariant {
    #[default]
    Standard,
    /// `T` with its sign flipped.
    Negated,
}

/// Pointwise conformal quantities at one Frenet point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalPoint {
    /// `dt/du = (k'² + k²τ²)^{1/4}`.
    pub dt_du: f64,
    /// Conformal torsion `T`.
    pub torsion: f64,
    /// `|T|·dt/du`, the density of ω per unit arc length.
    pub omega: f64,
}

/// `T = (2k'²τ + k²τ³ + kk'τ' − kk''τ) / (k'² + k²τ²)^{5/4}`.
pub fn conformal_point(p: &FrenetPoint, variant: TorsionVariant) -> ConformalPoint {
    let (k, dk, ddk, tau, dtau) = (p.k, p.dk, p.ddk, p.tau, p.dtau);
    let g = dk * dk + k * k * tau * tau;
    let num = 2.0 * dk * dk * tau + k * k * tau.powi(3) + k * dk * dtau - k * ddk * tau;
    let sign = match variant {
        TorsionVariant::Standard => 1.0,
        TorsionVariant::Negated => -1.0,
    };
    let dt_du = g.powf(0.25);
    let torsion = sign * num / g.powf(1.25);
    ConformalPoint {
        dt_du,
        torsion,
        omega: torsion.abs() * dt_du,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalInvariants {
    pub params: Vec<f64>,
    pub points: Vec<ConformalPoint>,
    /// Euclidean speed `du/dt_param` at each sample.
    pub speed: Vec<f64>,
    pub total_conformal_length: f64,
    /// `∫T dt`.
    pub total_t: f64,
    /// `∫|T| dt = ∫ω`.
    pub total_abs_t: f64,
    /// `∫τ du`.
    pub total_torsion: f64,
    /// `∫T dt` by the trapezoid rule on the sample grid, for comparison.
    pub total_t_trapezoid: f64,
    pub variant: TorsionVariant,
}

/// Conformal arc length, conformal torsion and ω of a vertex-free closed curve.
pub fn conformal_invariants(x: &PeriodicCurve) -> Result<ConformalInvariants> {
    conformal_invariants_with(x, TorsionVariant::Standard)
}

pub fn conformal_invariants_with(
    x: &PeriodicCurve,
    variant: TorsionVariant,
) -> Result<ConformalInvariants> {
    let frenet = frenet_apparatus(x)?;
    let vertices = detect_vertices(&frenet, VERTEX_TOL);
    if !vertices.vertex_free {
        let t = vertices.vertices.first().copied().unwrap_or(0.0);
        return Err(GeomError::Vertex {
            t,
            margin: vertices.margin,
        });
    }
    let points: Vec<ConformalPoint> = frenet
        .points
        .iter()
        .map(|p| conformal_point(p, variant))
        .collect();
    let speed: Vec<f64> = frenet.points.iter().map(|p| p.speed).collect();
    let period = x.period();
    let trap = |f: &dyn Fn(usize) -> f64| {
        periodic_trapezoid(&(0..points.len()).map(f).collect::<Vec<_>>(), period)
    };
    let total_t_trapezoid = trap(&|j| points[j].torsion * points[j].dt_du * speed[j]);

    // parameter-space densities, integrated adaptively on the interpolant
    let density = |t: f64, f: fn(&ConformalPoint, &FrenetPoint) -> f64| {
        let p = frenet_at(x, t).expect("space curve");
        f(&conformal_point(&p, variant), &p) * p.speed
    };
    let adaptive = |f: fn(&ConformalPoint, &FrenetPoint) -> f64| {
        integrate(
            |t| density(t, f),
            0.0,
            period,
            1e-12,
            1e-14,
            x.len() / 4,
            100_000,
        )
        .value
    };
    let total_t = adaptive(|c, _| c.torsion * c.dt_du);
    let total_abs_t = adaptive(|c, _| c.omega);
    let total_conformal_length = adaptive(|c, _| c.dt_du);
    let total_torsion = adaptive(|_, p| p.tau);
    Ok(ConformalInvariants {
        params: x.params(),
        points,
        speed,
        total_conformal_length,
        total_t,
        total_abs_t,
        total_torsion,
        total_t_trapezoid,
        variant,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorollaryVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub verdict: CorollaryVerdict,
    /// `∫ω = ∫|T| dt`.
    pub omega_total: Option<f64>,
    /// `∫T dt`.
    pub t_total: Option<f64>,
    pub total_torsion: Option<f64>,
    /// Distance of `(∫T dt − ∫τ du)/2π` from the nearest integer.
    pub congruence_residual: Option<f64>,
    /// That nearest integer.
    pub winding: Option<i64>,
    pub spherical_points: usize,
    pub bound_ok: bool,
    pub sign_ok: bool,
    pub congruence_ok: bool,
    pub reason: Option<String>,
}

/// Tolerances of [`corollary_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryTolerances {
    pub bound: f64,
    pub sign: f64,
    pub congruence: f64,
}

impl Default for CorollaryTolerances {
    fn default() -> Self {
        Self {
            bound: 1e-6,
            sign: 1e-8,
            congruence: 1e-4,
        }
    }
}

/// Congruence of a value modulo 2π: `(nearest integer, distance)` of `v/2π`.
pub fn mod_two_pi(v: f64) -> (i64, f64) {
    let q = v / TAU;
    (q.round() as i64, (q - q.round()).abs())
}

/// Checks `∫|T| dt ≥ 2π`, `|∫T dt| = ∫|T| dt` and `∫T dt ≡ ∫τ du (mod 2π)`.
///
/// Curves with vertices or spherical points get `NotApplicable`, with whatever
/// values could still be computed.
pub fn corollary_check(
    x: &PeriodicCurve,
    tol: CorollaryTolerances,
    variant: TorsionVariant,
) -> CorollaryReport {
    let mut r = CorollaryReport {
        verdict: CorollaryVerdict::NotApplicable,
        omega_total: None,
        t_total: None,
        total_torsion: None,
        congruence_residual: None,
        winding: None,
        spherical_points: 0,
        bound_ok: false,
        sign_ok: false,
        congruence_ok: false,
        reason: None,
    };
    let inv = match conformal_invariants_with(x, variant) {
        Ok(inv) => inv,
        Err(e) => {
            r.reason = Some(e.to_string());
            return r;
        }
    };
    r.omega_total = Some(inv.total_abs_t);
    r.t_total = Some(inv.total_t);
    r.total_torsion = Some(inv.total_torsion);
    let (w, res) = mod_two_pi(inv.total_t - inv.total_torsion);
    r.winding = Some(w);
    r.congruence_residual = Some(res);
    r.bound_ok = inv.total_abs_t >= TAU - tol.bound;
    r.sign_ok = (inv.total_t.abs() - inv.total_abs_t).abs() <= tol.sign;
    r.congruence_ok = res <= tol.congruence;
    match osculating_canal(x) {
        Ok(oc) => {
            let sp = detect_spherical_points(&oc, SPHERICAL_TOL);
            r.spherical_points = if sp.all { x.len() } else { sp.points.len() };
        }
        Err(e) => {
            r.reason = Some(e.to_string());
            return r;
        }
    }
    if r.spherical_points > 0 {
        r.reason = Some(format!("{} spherical points", r.spherical_points));
        return r;
    }
    r.verdict = if r.bound_ok && r.sign_ok && r.congruence_ok {
        CorollaryVerdict::Pass
    } else {
        CorollaryVerdict::Fail
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    #[test]
    fn helix_constants() {
        let p = crate::curves::frenet_from_jet(
            0.0,
            &[
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(0.0, 1.0, 1.0),
                Vector3::new(-1.0, 0.0, 0.0),
                Vector3::new(0.0, -1.0, 0.0),
                Vector3::new(1.0, 0.0, 0.0),
            ],
        );
        let c = conformal_point(&p, TorsionVariant::Standard);
        // k = τ = 1/2: T = √(τ/k) = 1, dt/du = √(kτ) = 1/2
        assert!((c.torsion - 1.0).abs() < 1e-13);
        assert!((c.dt_du - 0.5).abs() < 1e-14);
        assert!((c.omega - 0.5).abs() < 1e-13);
    }

    #[test]
    fn planar_arc_has_zero_torsion() {
        let x = crate::curves::generators::ellipse(2.0, 1.0, 64).unwrap();
        let p = frenet_at(&x, 0.4).unwrap();
        let c = conformal_point(&p, TorsionVariant::Standard);
        assert!(c.torsion.abs() < 1e-9);
    }

    #[test]
    fn mod_two_pi_distance() {
        assert_eq!(mod_two_pi(2.0 * TAU + 1e-6).0, 2);
        assert!((mod_two_pi(-TAU).1).abs() < 1e-15);
    }
}
