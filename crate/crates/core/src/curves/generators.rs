//! Closed test curves.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::periodic::PeriodicCurve;
use crate::error::{GeomError, Result};

/// `((R + r cos qt) cos pt, (R + r cos qt) sin pt, r sin qt)`, `t ∈ [0, 2π)`.
pub fn torus_knot(p: u32, q: u32, big_r: f64, small_r: f64, n: usize) -> Result<PeriodicCurve> {
    if !(big_r > small_r && small_r > 0.0) {
        return Err(GeomError::Precondition(format!(
            "need R > r > 0, got R={big_r}, r={small_r}"
        )));
    }
    let (p, q) = (p as f64, q as f64);
    PeriodicCurve::from_fn(n, TAU, |t| {
        let rho = big_r + small_r * (q * t).cos();
        vec![
            rho * (p * t).cos(),
            rho * (p * t).sin(),
            small_r * (q * t).sin(),
        ]
    })
}

/// The (2,3) torus knot on the torus with radii 2 and 1.
pub fn trefoil(n: usize) -> Result<PeriodicCurve> {
    torus_knot(2, 3, 2.0, 1.0, n)
}

pub fn circle(radius: f64, n: usize) -> Result<PeriodicCurve> {
    PeriodicCurve::from_fn(n, TAU, |t| vec![radius * t.cos(), radius * t.sin(), 0.0])
}

pub fn ellipse(a: f64, b: f64, n: usize) -> Result<PeriodicCurve> {
    PeriodicCurve::from_fn(n, TAU, |t| vec![a * t.cos(), b * t.sin(), 0.0])
}

/// Closed curve on the sphere of radius `radius` about the origin, obtained by
/// radially projecting `(cos t, sin t, a sin 3t + b cos 2t)`.
pub fn spherical_curve(radius: f64, a: f64, b: f64, n: usize) -> Result<PeriodicCurve> {
    PeriodicCurve::from_fn(n, TAU, |t| {
        let u = [t.cos(), t.sin(), a * (3.0 * t).sin() + b * (2.0 * t).cos()];
        let m = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        u.iter().map(|x| radius * x / m).collect()
    })
}

/// Random trigonometric polynomial of the given degree in ℝ³.
///
/// Coefficients of frequency `k` are standard normal scaled by `1/k`.
pub fn random_curve(seed: u64, degree: usize, n: usize) -> Result<PeriodicCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<[[f64; 2]; 3]> = (1..=degree)
        .map(|k| {
            std::array::from_fn(|_| {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                [a / k as f64, b / k as f64]
            })
        })
        .collect();
    PeriodicCurve::from_fn(n, TAU, |t| {
        (0..3)
            .map(|c| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, cf)| {
                        let (s, co) = ((i + 1) as f64 * t).sin_cos();
                        cf[c][0] * co + cf[c][1] * s
                    })
                    .sum()
            })
            .collect()
    })
}
