//! Oriented 2-spheres of S³ as points of de Sitter space Λ⁴.
//!
//! A unit space-like `σ` defines the sphere `σ⊥ ∩ C` (null lines orthogonal to
//! it) oriented by the ball `{span(γ) : <σ,γ> > 0}`. Points of S³ use the
//! section `x₅ = 1` of the light cone, and ℝ³ is reached by stereographic
//! projection from the pole `(0,0,0,1)`.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lorentz::{causal_type, inner, orthonormal_basis, CausalType, LorentzVector};

/// Tolerance on `<σ,σ> = 1` accepted by [`SpherePoint::new`].
pub const UNIT_TOL: f64 = 1e-9;

/// A unit space-like vector: one oriented sphere of S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(LorentzVector);

impl SpherePoint {
    pub fn new(sigma: LorentzVector) -> Result<Self> {
        let q = sigma.quad();
        if !sigma.is_finite() || (q - 1.0).abs() > UNIT_TOL {
            return Err(GeomError::NotOnDeSitter(q));
        }
        Ok(Self(sigma))
    }

    /// Rescales a space-like vector onto Λ⁴.
    pub fn normalize(v: LorentzVector) -> Result<Self> {
        let q = v.quad();
        if !(q > 0.0) {
            return Err(GeomError::NotOnDeSitter(q));
        }
        Ok(Self(v / q.sqrt()))
    }

    pub fn vector(&self) -> LorentzVector {
        self.0
    }

    /// The same sphere with the opposite orientation.
    pub fn flipped(&self) -> Self {
        Self(-self.0)
    }
}

/// A point of S³ on the section `x₅ = 1` of the light cone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S3Point {
    gamma: LorentzVector,
}

impl S3Point {
    /// Normalizes a point of ℝ⁴ onto the unit sphere.
    pub fn from_r4(x: [f64; 4]) -> Result<Self> {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeomError::NonFinite);
        }
        Ok(Self {
            gamma: LorentzVector::new(x[0] / n, x[1] / n, x[2] / n, x[3] / n, 1.0),
        })
    }

    /// Projectivizes a nonzero null vector onto the section.
    pub fn from_null(v: &LorentzVector) -> Result<Self> {
        if v[4].abs() <= 1e-300 {
            return Err(GeomError::Precondition(
                "null vector with vanishing x5".into(),
            ));
        }
        let g = *v / v[4];
        Self::from_r4([g[0], g[1], g[2], g[3]])
    }

    pub fn gamma(&self) -> LorentzVector {
        self.gamma
    }

    pub fn r4(&self) -> [f64; 4] {
        [self.gamma[0], self.gamma[1], self.gamma[2], self.gamma[3]]
    }
}

/// Centre on S³ and spherical radius in `(0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterRadius {
    pub m: [f64; 4],
    pub r: f64,
}

pub fn sphere_from_center_radius(cr: &CenterRadius) -> Result<SpherePoint> {
    let CenterRadius { m, r } = *cr;
    if !(r > 0.0 && r < std::f64::consts::PI) {
        return Err(GeomError::InvalidRadius(r));
    }
    let norm = m.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(GeomError::Precondition(format!(
            "centre must be a unit vector, |m| = {norm}"
        )));
    }
    let s = r.sin();
    SpherePoint::new(LorentzVector::new(m[0], m[1], m[2], m[3], r.cos()) / s)
}

pub fn center_radius_from_sphere(sigma: &SpherePoint) -> CenterRadius {
    let v = sigma.vector();
    // σ₅ = cot r with r ∈ (0, π)
    let r = 1f64.atan2(v[4]);
    let s = r.sin();
    let mut m = [v[0] * s, v[1] * s, v[2] * s, v[3] * s];
    let n = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    m.iter_mut().for_each(|x| *x /= n);
    CenterRadius { m, r }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereAngle {
    /// Unoriented angle in `[0, π/2]`.
    Intersecting { angle: f64 },
    /// `|<σ₁,σ₂>| > 1`: nested or disjoint spheres.
    Disjoint { abs_inner: f64 },
}

pub fn angle_between(s1: &SpherePoint, s2: &SpherePoint) -> SphereAngle {
    let c = inner(&s1.vector(), &s2.vector()).abs();
    if c <= 1.0 {
        SphereAngle::Intersecting { angle: c.acos() }
    } else {
        SphereAngle::Disjoint { abs_inner: c }
    }
}

/// Contact order between a curve `span(γ(t))` and the sphere `σ` at `t₀`.
///
/// `jet` holds `γ(t₀), γ'(t₀), …, γ⁽ᵏᵐᵃˣ⁾(t₀)` for any section of the light
/// cone. Returns the largest `k` such that `<σ, γ⁽ʲ⁾>` vanishes (relative to
/// `‖σ‖∞‖γ⁽ʲ⁾‖∞`) for every `j ≤ k`, and 0 if the point is off the sphere.
pub fn contact_order(jet: &[LorentzVector], sigma: &LorentzVector, tol: f64) -> usize {
    let mut order = 0;
    for (j, g) in jet.iter().enumerate() {
        let scale = sigma.norm_inf() * g.norm_inf();
        if inner(sigma, g).abs() <= tol * scale {
            order = j;
        } else {
            break;
        }
    }
    order
}

/// Per-derivative relative pairings `|<σ,γ⁽ʲ⁾>| / (‖σ‖∞‖γ⁽ʲ⁾‖∞)`.
pub fn contact_residuals(jet: &[LorentzVector], sigma: &LorentzVector) -> Vec<f64> {
    jet.iter()
        .map(|g| {
            let scale = sigma.norm_inf() * g.norm_inf();
            if scale > 0.0 {
                inner(sigma, g).abs() / scale
            } else {
                0.0
            }
        })
        .collect()
}

/// A circle as the intersection of two spheres spanning a space-like plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleRep {
    pub first: SpherePoint,
    pub second: SpherePoint,
}

impl CircleRep {
    pub fn new(first: SpherePoint, second: SpherePoint) -> Result<Self> {
        let c = inner(&first.vector(), &second.vector());
        // Gram matrix [[1,c],[c,1]] is positive definite iff |c| < 1
        if c.abs() >= 1.0 - 1e-12 {
            let negative = usize::from(c.abs() > 1.0);
            return Err(GeomError::NotSpacelike {
                positive: 2 - negative,
                negative,
            });
        }
        Ok(Self { first, second })
    }

    pub fn frame(&self) -> Result<CircleFrame> {
        CircleFrame::from_planes(&[self.first.vector(), self.second.vector()])
    }
}

/// Lorentz-orthonormal frame `(f₁, f₂, f₃)` of a subspace of signature
/// `(+,+,−)`; its null directions form a circle of S³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFrame {
    pub f1: LorentzVector,
    pub f2: LorentzVector,
    /// Time-like, with positive fifth component.
    pub f3: LorentzVector,
}

impl CircleFrame {
    /// Frame of the orthogonal complement of a space-like plane.
    pub fn from_planes(plane: &[LorentzVector; 2]) -> Result<Self> {
        let comp = crate::lorentz::orthogonal_complement(plane)?;
        Self::from_span(&comp)
    }

    /// Frame of a three-dimensional subspace `W` of signature `(+,+,−)`.
    ///
    /// `f₃` is the normalized projection of e₅ onto `W`, so `f₁, f₂` have zero
    /// fifth component and the points `θ ↦ point(θ)` are equally spaced on S³.
    pub fn from_span(span: &[LorentzVector]) -> Result<Self> {
        let b = orthonormal_basis(span)?;
        if b.vectors.len() != 3 || b.negative_count() != 1 {
            return Err(GeomError::NotSpacelike {
                positive: b.positive_count(),
                negative: b.negative_count(),
            });
        }
        let e5 = LorentzVector::basis(4);
        let p: LorentzVector = b
            .vectors
            .iter()
            .zip(&b.signs)
            .map(|(v, s)| *v * (s * inner(&e5, v)))
            .sum();
        // <p,p> = -1 - |component of e5 orthogonal to W|² < 0
        let f3 = p / (-p.quad()).sqrt();
        let g = crate::lorentz::gram_schmidt_lorentz(&[f3, b.vectors[0], b.vectors[1]])?;
        Ok(Self {
            f1: g.vectors[1],
            f2: g.vectors[2],
            f3,
        })
    }

    /// Null vector `cos θ f₁ + sin θ f₂ + f₃`; its fifth component is positive.
    pub fn point(&self, theta: f64) -> LorentzVector {
        let (s, c) = theta.sin_cos();
        self.f1 * c + self.f2 * s + self.f3
    }

    /// Rotates `(f₁, f₂)` so that `θ = 0` lands on the null line of `gamma`.
    pub fn anchored_at(&self, gamma: &LorentzVector) -> Self {
        let scale = -inner(gamma, &self.f3);
        let (a, b) = (
            inner(gamma, &self.f1) / scale,
            inner(gamma, &self.f2) / scale,
        );
        let th = b.atan2(a);
        self.rotated(th)
    }

    pub fn rotated(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            f1: self.f1 * c + self.f2 * s,
            f2: self.f2 * c - self.f1 * s,
            f3: self.f3,
        }
    }

    /// Angle of the null line of `gamma` in this frame.
    pub fn angle_of(&self, gamma: &LorentzVector) -> f64 {
        let scale = -inner(gamma, &self.f3);
        (inner(gamma, &self.f2) / scale).atan2(inner(gamma, &self.f1) / scale)
    }
}

/// `n` points `θᵢ = 2πi/n` of the circle on S³.
pub fn circle_points(circle: &CircleRep, n: usize) -> Result<Vec<S3Point>> {
    let frame = circle.frame()?;
    (0..n)
        .map(|i| S3Point::from_null(&frame.point(std::f64::consts::TAU * i as f64 / n as f64)))
        .collect()
}

/// Image of a point of S³ in ℝ³, or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Projected {
    Point([f64; 3]),
    Infinity,
}

impl Projected {
    pub fn point(self) -> Option<[f64; 3]> {
        match self {
            Self::Point(p) => Some(p),
            Self::Infinity => None,
        }
    }
}

/// Stereographic projection from `(0,0,0,1)`: `x ↦ (x₁,x₂,x₃)/(1−x₄)`.
pub fn stereographic_to_r3(p: &S3Point) -> Projected {
    let [x1, x2, x3, x4] = p.r4();
    let d = 1.0 - x4;
    if d <= 1e-14 {
        Projected::Infinity
    } else {
        Projected::Point([x1 / d, x2 / d, x3 / d])
    }
}

pub fn inverse_stereographic(x: &[f64; 3]) -> S3Point {
    let n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let d = n2 + 1.0;
    S3Point {
        gamma: LorentzVector::new(
            2.0 * x[0] / d,
            2.0 * x[1] / d,
            2.0 * x[2] / d,
            (n2 - 1.0) / d,
            1.0,
        ),
    }
}

/// Projects a nonzero null vector to ℝ³.
pub fn project_null(v: &LorentzVector) -> Projected {
    match S3Point::from_null(v) {
        Ok(p) => stereographic_to_r3(&p),
        Err(_) => Projected::Infinity,
    }
}

/// Null vector `(2x, |x|²−1, |x|²+1)` over `x ∈ ℝ³`, a polynomial section.
pub fn null_lift(x: &[f64; 3]) -> LorentzVector {
    let n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    LorentzVector::new(2.0 * x[0], 2.0 * x[1], 2.0 * x[2], n2 - 1.0, n2 + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// The bounded ball is `B_σ`.
    Inward,
    /// The unbounded complement is `B_σ`.
    Outward,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Self::Inward => 1.0,
            Self::Outward => -1.0,
        }
    }
}

/// A round sphere of ℝ³ with an orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanSphere {
    pub center: [f64; 3],
    pub radius: f64,
    pub orientation: Orientation,
}

impl EuclideanSphere {
    pub fn new(center: [f64; 3], radius: f64, orientation: Orientation) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::Precondition(format!(
                "invalid sphere radius {radius}"
            )));
        }
        Ok(Self {
            center,
            radius,
            orientation,
        })
    }

    /// Dihedral angle with another sphere by the law of cosines, if they meet.
    pub fn intersection_angle(&self, other: &Self) -> Option<f64> {
        let d2: f64 = (0..3)
            .map(|i| (self.center[i] - other.center[i]).powi(2))
            .sum();
        let d = d2.sqrt();
        let (r1, r2) = (self.radius, other.radius);
        if d > r1 + r2 || d < (r1 - r2).abs() {
            return None;
        }
        let c = ((r1 * r1 + r2 * r2 - d2) / (2.0 * r1 * r2)).abs().min(1.0);
        Some(c.acos())
    }

    /// Signed distance-like residual `ρ² − |x − c|²`, positive inside.
    pub fn power(&self, x: &[f64; 3]) -> f64 {
        let d2: f64 = (0..3).map(|i| (x[i] - self.center[i]).powi(2)).sum();
        self.radius * self.radius - d2
    }
}

/// `σ = ±(c/ρ, (|c|²−ρ²−1)/(2ρ), (|c|²−ρ²+1)/(2ρ))`.
pub fn sphere_from_euclidean(s: &EuclideanSphere) -> SpherePoint {
    let [c1, c2, c3] = s.center;
    let rho = s.radius;
    let a = c1 * c1 + c2 * c2 + c3 * c3 - rho * rho;
    let v = LorentzVector::new(
        c1 / rho,
        c2 / rho,
        c3 / rho,
        (a - 1.0) / (2.0 * rho),
        (a + 1.0) / (2.0 * rho),
    );
    SpherePoint(v * s.orientation.sign())
}

/// Inverse of [`sphere_from_euclidean`]; spheres through the pole are planes.
pub fn euclidean_from_sphere(sigma: &SpherePoint) -> Result<EuclideanSphere> {
    let v = sigma.vector();
    let d = v[4] - v[3];
    if d.abs() <= 1e-12 * v.norm_inf() {
        return Err(GeomError::PlaneSphere);
    }
    let orientation = if d > 0.0 {
        Orientation::Inward
    } else {
        Orientation::Outward
    };
    let rho = 1.0 / d.abs();
    let center = [v[0] / d, v[1] / d, v[2] / d];
    Ok(EuclideanSphere {
        center,
        radius: rho,
        orientation,
    })
}

/// Whether a family of spheres with time-like tangents is pairwise disjoint.
///
/// Pairs of (numerically) identical spheres are skipped.
pub fn nestedness_check(
    spheres: &[SpherePoint],
    tangents: &[LorentzVector],
    tol: f64,
) -> Result<bool> {
    if spheres.len() != tangents.len() {
        return Err(GeomError::Precondition(
            "one tangent per sphere required".into(),
        ));
    }
    for (i, t) in tangents.iter().enumerate() {
        if causal_type(t, tol) != CausalType::Timelike {
            return Err(GeomError::Precondition(format!(
                "tangent {i} is not time-like"
            )));
        }
    }
    for (i, a) in spheres.iter().enumerate() {
        for b in &spheres[i + 1..] {
            if (a.vector() - b.vector()).norm_inf() <= tol {
                continue;
            }
            if inner(&a.vector(), &b.vector()).abs() <= 1.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
