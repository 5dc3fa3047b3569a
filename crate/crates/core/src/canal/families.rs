//! Closed paths with closed-form jets: pencil geodesics, Dupin cyclide
//! circles, minimal drills and seeded random paths.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{unit_jet, LorentzPath};
use crate::curves::PeriodicCurve;
use crate::error::{GeomError, Result};
use crate::lorentz::{
    gram_schmidt_lorentz, inner, random_lorentz_transform, LorentzTransform, LorentzVector,
};

fn circle_jet(
    center: LorentzVector,
    f1: LorentzVector,
    f2: LorentzVector,
    r: f64,
    t: f64,
) -> [LorentzVector; 3] {
    let (s, c) = t.sin_cos();
    [
        center + (f1 * c + f2 * s) * r,
        (f2 * c - f1 * s) * r,
        -(f1 * c + f2 * s) * r,
    ]
}

/// `σ(s) = cos s·v + sin s·w` for Lorentz-orthonormal space-like `v, w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicPath {
    pub v: LorentzVector,
    pub w: LorentzVector,
}

pub fn pencil_geodesic(v: LorentzVector, w: LorentzVector) -> Result<GeodesicPath> {
    let tol = 1e-10;
    if (v.quad() - 1.0).abs() > tol || (w.quad() - 1.0).abs() > tol || inner(&v, &w).abs() > tol {
        return Err(GeomError::Precondition(
            "v, w must be orthonormal space-like vectors".into(),
        ));
    }
    Ok(GeodesicPath { v, w })
}

impl LorentzPath for GeodesicPath {
    fn period(&self) -> f64 {
        TAU
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        circle_jet(LorentzVector::ZERO, self.v, self.w, 1.0, t)
    }
}

/// `σ(t) = x + R(cos t·f₁ + sin t·f₂)`: the circle cut from Λ⁴ by the affine
/// plane `x + span(f₁, f₂)`, with `R = √(1 − <x,x>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclideCircle {
    pub x: LorentzVector,
    pub f1: LorentzVector,
    pub f2: LorentzVector,
    pub radius: f64,
}

pub fn dupin_cyclide_canal(x: LorentzVector, h_basis: [LorentzVector; 2]) -> Result<CyclideCircle> {
    let b = gram_schmidt_lorentz(&h_basis)?;
    if b.negative_count() > 0 {
        return Err(GeomError::NotSpacelike {
            positive: b.positive_count(),
            negative: b.negative_count(),
        });
    }
    let (f1, f2) = (b.vectors[0], b.vectors[1]);
    let scale = x.norm_inf().max(1.0);
    if inner(&x, &f1).abs() > 1e-10 * scale || inner(&x, &f2).abs() > 1e-10 * scale {
        return Err(GeomError::Precondition(
            "x must be orthogonal to the plane directions".into(),
        ));
    }
    let q = x.quad();
    if q >= 1.0 {
        return Err(GeomError::EmptyIntersection(q));
    }
    Ok(CyclideCircle {
        x,
        f1,
        f2,
        radius: (1.0 - q).sqrt(),
    })
}

impl LorentzPath for CyclideCircle {
    fn period(&self) -> f64 {
        TAU
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        circle_jet(self.x, self.f1, self.f2, self.radius, t)
    }
}

/// `σ(s) = λ(s)u + cos s·v + sin s·w` with `u` null and `v, w` orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalDrill {
    pub lambda: PeriodicCurve,
    pub u: LorentzVector,
    pub v: LorentzVector,
    pub w: LorentzVector,
}

pub fn minimal_drill(
    lambda: PeriodicCurve,
    u: LorentzVector,
    v: LorentzVector,
    w: LorentzVector,
) -> Result<MinimalDrill> {
    let tol = 1e-10;
    if lambda.dim() != 1 {
        return Err(GeomError::Dimension {
            expected: 1,
            got: lambda.dim(),
        });
    }
    if (lambda.period() - TAU).abs() > 1e-12 {
        return Err(GeomError::Precondition("lambda must be 2π-periodic".into()));
    }
    let s = u.norm_inf().max(1.0);
    let checks = [
        u.quad().abs() <= tol * s * s,
        (v.quad() - 1.0).abs() <= tol,
        (w.quad() - 1.0).abs() <= tol,
        inner(&u, &v).abs() <= tol * s,
        inner(&u, &w).abs() <= tol * s,
        inner(&v, &w).abs() <= tol,
        u.norm_inf() > 0.0,
    ];
    if checks.iter().any(|ok| !ok) {
        return Err(GeomError::Precondition(
            "need <u,u> = 0, v, w orthonormal and orthogonal to u".into(),
        ));
    }
    if lambda.samples().iter().any(|r| !(r[0] > 0.0)) {
        return Err(GeomError::Precondition("lambda must be positive".into()));
    }
    Ok(MinimalDrill { lambda, u, v, w })
}

impl MinimalDrill {
    /// `(λ + λ'')(s)·u`, the closed-form geodesic curvature vector.
    pub fn expected_kg(&self, s: f64) -> LorentzVector {
        let l = self.lambda.jet(s, 2);
        self.u * (l[0][0] + l[2][0])
    }
}

impl LorentzPath for MinimalDrill {
    fn period(&self) -> f64 {
        TAU
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        let l = self.lambda.jet(t, 2);
        let c = circle_jet(LorentzVector::ZERO, self.v, self.w, 1.0, t);
        std::array::from_fn(|i| c[i] + self.u * l[i][0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomFamily {
    /// Randomly perturbed regular cyclide circles, moved by a random Möbius map.
    PerturbedCyclide,
    /// Random low-order Fourier coefficients.
    Fourier,
}

/// `σ = ν/√<ν,ν>` for a trigonometric polynomial `ν` in ℝ⁵.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomPath {
    /// `(a_k, b_k)` for `k = 0..K`: `ν = Σ a_k cos kt + b_k sin kt`.
    pub coefficients: Vec<[LorentzVector; 2]>,
    pub family: RandomFamily,
    pub seed: u64,
}

impl LorentzPath for RandomPath {
    fn period(&self) -> f64 {
        TAU
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        let mut nu = [LorentzVector::ZERO; 3];
        for (k, [a, b]) in self.coefficients.iter().enumerate() {
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            nu[0] += *a * c + *b * s;
            nu[1] += (*b * c - *a * s) * kf;
            nu[2] -= (*a * c + *b * s) * (kf * kf);
        }
        unit_jet(&nu)
    }
}

impl RandomPath {
    /// Smallest `<ν,ν>` over a grid; the path is defined when it is positive.
    pub fn min_quad(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|j| {
                let t = TAU * j as f64 / grid as f64;
                let mut nu = LorentzVector::ZERO;
                for (k, [a, b]) in self.coefficients.iter().enumerate() {
                    let (s, c) = (k as f64 * t).sin_cos();
                    nu += *a * c + *b * s;
                }
                nu.quad()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn gaussian_vector(rng: &mut ChaCha8Rng) -> LorentzVector {
    LorentzVector(std::array::from_fn(|_| rng.sample(StandardNormal)))
}

/// Seeded random closed path in Λ⁴.
///
/// The perturbed-cyclide family starts from `√δ e₅ + √(1+δ)(cos t e₁ + sin t e₂)`
/// with log-uniform `δ ∈ [1e-4, 1]`, adds Fourier noise of relative size up to
/// `δ/3` in frequencies 0..3 and applies a random Lorentz transform. The
/// Fourier family draws standard normal coefficients of frequencies 0..2 and
/// a dominant space-like circle. Paths whose `ν` comes near the light cone are
/// redrawn from the same stream.
pub fn random_path(seed: u64, family: RandomFamily) -> RandomPath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coefficients = match family {
            RandomFamily::PerturbedCyclide => {
                let delta = 10f64.powf(rng.random_range(-4.0..0.0));
                let eps = delta * 10f64.powf(rng.random_range(-3.0..-0.5));
                let r = (1.0 + delta).sqrt();
                let mut c = vec![[LorentzVector::ZERO; 2]; 4];
                c[0][0] = LorentzVector::basis(4) * delta.sqrt();
                c[1][0] = LorentzVector::basis(0) * r;
                c[1][1] = LorentzVector::basis(1) * r;
                for pair in c.iter_mut() {
                    for v in pair.iter_mut() {
                        *v += gaussian_vector(&mut rng) * eps;
                    }
                }
                let m: LorentzTransform = random_lorentz_transform(rng.random());
                c.iter().map(|[a, b]| [m.apply(a), m.apply(b)]).collect()
            }
            RandomFamily::Fourier => {
                let mut c: Vec<[LorentzVector; 2]> = (0..3)
                    .map(|_| {
                        [
                            gaussian_vector(&mut rng) * 0.3,
                            gaussian_vector(&mut rng) * 0.3,
                        ]
                    })
                    .collect();
                c[1][0] += LorentzVector::basis(0) * 1.5;
                c[1][1] += LorentzVector::basis(1) * 1.5;
                c
            }
        };
        let p = RandomPath {
            coefficients,
            family,
            seed,
        };
        if p.min_quad(256)
            > 1e-3
                * p.coefficients
                    .iter()
                    .map(|[a, b]| a.quad().abs() + b.quad().abs())
                    .sum::<f64>()
        {
            return p;
        }
    }
}
