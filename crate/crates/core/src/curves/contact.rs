//! Contact order of a space curve with a sphere, circle or line, estimated
//! from the rate at which the curve leaves the target near a point.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::frenet::EuclideanCircle;
use super::periodic::PeriodicCurve;
use crate::error::Result;
use crate::spheremodel::EuclideanSphere;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContactTarget {
    Sphere(EuclideanSphere),
    Circle(EuclideanCircle),
    Line {
        point: [f64; 3],
        direction: [f64; 3],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactEstimate {
    /// Estimated contact order; a lower bound when `saturated`.
    pub order: usize,
    /// Fitted vanishing exponent of the deviation (`order + 1` ideally).
    pub slope: f64,
    /// Distance of `slope` from the nearest integer.
    pub residual: f64,
    /// The deviation stayed below the roundoff floor at every step.
    pub saturated: bool,
}

/// Step sizes `h = scale·2⁻ʲ`.
const STEPS: usize = 24;
/// Orders reported when the deviation is indistinguishable from zero.
pub const SATURATED_ORDER: usize = 6;

fn v3(p: &[f64]) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}

/// Deviation from the target and its roundoff floor.
fn deviation(target: &ContactTarget, x0: &Vector3<f64>, x: &Vector3<f64>) -> (f64, f64) {
    let eps = f64::EPSILON;
    match target {
        ContactTarget::Sphere(s) => {
            // power of the point, expanded around x0 to keep cancellation small
            let c = v3(&s.center);
            let d = x - x0;
            let e = x0 - c;
            let q0 = e.norm_squared() - s.radius * s.radius;
            let q = d.norm_squared() + 2.0 * d.dot(&e) + q0;
            let floor = 64.0 * eps * (x0.norm() + s.radius) * (e.norm() + s.radius);
            (q, floor)
        }
        ContactTarget::Circle(c) => {
            let n = v3(&c.normal).normalize();
            let p = x - v3(&c.center);
            let height = p.dot(&n);
            let radial = (p - n * height).norm();
            let dist = (radial - c.radius).hypot(height);
            (dist, 64.0 * eps * (x.norm() + c.radius))
        }
        ContactTarget::Line { point, direction } => {
            let u = v3(direction).normalize();
            let dist = (x - v3(point)).cross(&u).norm();
            (dist, 64.0 * eps * (x.norm() + v3(point).norm()))
        }
    }
}

/// Fitted exponent of `|values[j]| ~ C·2^{−p j}` from the finest pair above the floor.
fn vanishing_exponent(values: &[f64], floors: &[f64]) -> Option<f64> {
    let usable = |j: usize| values[j].abs() > 1e3 * floors[j];
    (1..values.len())
        .rev()
        .find(|&j| usable(j) && usable(j - 1))
        .map(|j| (values[j - 1].abs() / values[j].abs()).log2())
}

/// Contact order of `curve` at `t` with `target`, by the order of vanishing of
/// the deviation over `h ∈ {±2⁻ʲ}`.
///
/// For spheres the deviation is the power of `x(t+h)` and vanishes to order
/// `contact + 1`; even and odd parts in `h` are fitted separately. For circles
/// and lines the euclidean distance is used. Returns order 0 if `x(t)` is off
/// the target.
pub fn bouquet_contact_oracle(
    curve: &PeriodicCurve,
    t: f64,
    target: &ContactTarget,
) -> Result<ContactEstimate> {
    let x0 = v3(&curve.eval(t));
    let (d0, floor0) = deviation(target, &x0, &x0);
    let scale = match target {
        ContactTarget::Sphere(s) => s.radius * s.radius,
        ContactTarget::Circle(c) => c.radius,
        ContactTarget::Line { .. } => x0.norm().max(1.0),
    };
    if d0.abs() > 1e-8 * scale.max(floor0) {
        return Ok(ContactEstimate {
            order: 0,
            slope: 0.0,
            residual: 0.0,
            saturated: false,
        });
    }
    let h0 = 0.25 * curve.period() / std::f64::consts::TAU;
    let mut plus = Vec::with_capacity(STEPS);
    let mut minus = Vec::with_capacity(STEPS);
    let mut floors = Vec::with_capacity(STEPS);
    for j in 0..STEPS {
        let h = h0 * 0.5f64.powi(j as i32);
        let (dp, fp) = deviation(target, &x0, &v3(&curve.eval(t + h)));
        let (dm, fm) = deviation(target, &x0, &v3(&curve.eval(t - h)));
        plus.push(dp);
        minus.push(dm);
        floors.push(fp.max(fm));
    }
    let exponent = match target {
        ContactTarget::Sphere(_) => {
            let even: Vec<f64> = plus
                .iter()
                .zip(&minus)
                .map(|(a, b)| 0.5 * (a + b))
                .collect();
            let odd: Vec<f64> = plus
                .iter()
                .zip(&minus)
                .map(|(a, b)| 0.5 * (a - b))
                .collect();
            match (
                vanishing_exponent(&even, &floors),
                vanishing_exponent(&odd, &floors),
            ) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            }
        }
        _ => {
            let worst: Vec<f64> = plus
                .iter()
                .zip(&minus)
                .map(|(a, b)| a.abs().max(b.abs()))
                .collect();
            vanishing_exponent(&worst, &floors)
        }
    };
    Ok(match exponent {
        Some(p) => {
            let order = (p.round().max(1.0) as usize - 1).min(SATURATED_ORDER);
            ContactEstimate {
                order,
                slope: p,
                residual: (p - p.round()).abs(),
                saturated: false,
            }
        }
        None => ContactEstimate {
            order: SATURATED_ORDER,
            slope: f64::INFINITY,
            residual: 0.0,
            saturated: true,
        },
    })
}
