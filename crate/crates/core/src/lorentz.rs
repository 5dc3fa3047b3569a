//! Linear algebra on ℝ⁵ with the Lorentz form of signature (4,1).
//!
//! The bilinear form is `<x,y> = x1 y1 + x2 y2 + x3 y3 + x4 y4 - x5 y5`.
//! Null vectors model points of the conformal 3-sphere, unit space-like
//! vectors model oriented 2-spheres, and form-preserving linear maps act as
//! Möbius transformations.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, Matrix4, Matrix5, SymmetricEigen, Vector5};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Default relative tolerance for causal classification.
pub const DEFAULT_CAUSAL_TOL: f64 = 1e-8;

/// Diagonal of the Gram matrix `G = diag(1,1,1,1,-1)`.
pub const METRIC: [f64; 5] = [1.0, 1.0, 1.0, 1.0, -1.0];

/// A vector of ℝ⁵ carrying the Lorentz form.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzVector(pub [f64; 5]);

impl LorentzVector {
    pub const ZERO: Self = Self([0.0; 5]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64, x5: f64) -> Self {
        Self([x1, x2, x3, x4, x5])
    }

    /// The `i`-th standard basis vector, zero-based (`basis(4)` is e₅).
    pub fn basis(i: usize) -> Self {
        let mut v = Self::ZERO;
        v.0[i] = 1.0;
        v
    }

    pub fn from_slice(s: &[f64]) -> Result<Self> {
        let arr: [f64; 5] = s.try_into().map_err(|_| GeomError::Dimension {
            expected: 5,
            got: s.len(),
        })?;
        Ok(Self(arr))
    }

    pub fn as_array(&self) -> &[f64; 5] {
        &self.0
    }

    pub fn inner(&self, other: &Self) -> f64 {
        inner(self, other)
    }

    /// `<x,x>`.
    pub fn quad(&self) -> f64 {
        inner(self, self)
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn norm_euclid(&self) -> f64 {
        self.euclid_dot(self).sqrt()
    }

    pub fn euclid_dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Applies `G`, turning a Lorentz pairing into a euclidean dot product.
    pub fn lowered(&self) -> Self {
        let mut v = *self;
        v.0[4] = -v.0[4];
        v
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn to_vector5(self) -> Vector5<f64> {
        Vector5::from(self.0)
    }

    pub fn from_vector5(v: &Vector5<f64>) -> Self {
        Self([v[0], v[1], v[2], v[3], v[4]])
    }

    /// Euclidean angle between the lines spanned by two nonzero vectors.
    pub fn line_angle(&self, other: &Self) -> f64 {
        let a = *self / self.norm_euclid();
        let mut b = *other / other.norm_euclid();
        if a.euclid_dot(&b) < 0.0 {
            b = -b;
        }
        2.0 * ((a - b).norm_euclid() / 2.0).min(1.0).asin()
    }
}

impl fmt::Debug for LorentzVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{:?}", self.0)
    }
}

impl Index<usize> for LorentzVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for LorentzVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for LorentzVector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for LorentzVector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl Sub for LorentzVector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for LorentzVector {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for LorentzVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl Mul<f64> for LorentzVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self(self.0.map(|x| x * s))
    }
}

impl Mul<LorentzVector> for f64 {
    type Output = LorentzVector;
    fn mul(self, v: LorentzVector) -> LorentzVector {
        v * self
    }
}

impl Div<f64> for LorentzVector {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self(self.0.map(|x| x / s))
    }
}

impl std::iter::Sum for LorentzVector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// The Lorentz form `<x,y> = x₁y₁+x₂y₂+x₃y₃+x₄y₄−x₅y₅`.
pub fn inner(x: &LorentzVector, y: &LorentzVector) -> f64 {
    let (a, b) = (&x.0, &y.0);
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

impl CausalType {
    /// Light-like or time-like, the "nowhere space-like" class.
    pub fn is_causal(self) -> bool {
        matches!(self, Self::Timelike | Self::Lightlike)
    }
}

/// Classifies `x` with the relative tolerance `tol·‖x‖∞²` on the form.
pub fn causal_type(x: &LorentzVector, tol: f64) -> CausalType {
    let scale = x.norm_inf();
    if scale <= tol {
        return CausalType::Zero;
    }
    let q = x.quad();
    if q.abs() <= tol * scale * scale {
        CausalType::Lightlike
    } else if q > 0.0 {
        CausalType::Spacelike
    } else {
        CausalType::Timelike
    }
}

/// Lorentz exterior product of four vectors.
///
/// Returns the unique `ν` with `<ν,w> = det(a,b,c,d,w)` for every `w`.
pub fn wedge4(
    a: &LorentzVector,
    b: &LorentzVector,
    c: &LorentzVector,
    d: &LorentzVector,
) -> LorentzVector {
    let rows = [a, b, c, d];
    let mut cof = [0.0; 5];
    for (col, out) in cof.iter_mut().enumerate() {
        let minor = Matrix4::from_fn(|i, j| {
            let jj = if j < col { j } else { j + 1 };
            rows[i].0[jj]
        });
        // expansion along the fifth row: sign (-1)^(5 + col + 1) in one-based indices
        let sign = if (col + 4) % 2 == 0 { 1.0 } else { -1.0 };
        *out = sign * minor.determinant();
    }
    // <ν,w> = Σ cofᵢ wᵢ, and the form flips the fifth slot
    LorentzVector([cof[0], cof[1], cof[2], cof[3], -cof[4]])
}

/// An orthonormal family with respect to the Lorentz form.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzBasis {
    pub vectors: Vec<LorentzVector>,
    /// `<eᵢ,eᵢ>`, each `+1` or `-1`.
    pub signs: Vec<f64>,
}

impl LorentzBasis {
    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0.0).count()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.len() - self.negative_count()
    }
}

/// Gram–Schmidt with respect to the Lorentz form, preserving the flag of spans.
///
/// Fails with [`GeomError::DegenerateSpan`] when a step leaves a null (or zero)
/// direction, which happens exactly when some partial span is degenerate.
pub fn gram_schmidt_lorentz(vectors: &[LorentzVector]) -> Result<LorentzBasis> {
    const TOL: f64 = 1e-10;
    let mut out: Vec<LorentzVector> = Vec::with_capacity(vectors.len());
    let mut signs = Vec::with_capacity(vectors.len());
    for (step, v) in vectors.iter().enumerate() {
        if !v.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let scale = v.norm_inf().max(f64::MIN_POSITIVE);
        let mut u = *v;
        // two passes keep the result orthogonal to roundoff
        for _ in 0..2 {
            for (e, s) in out.iter().zip(&signs) {
                u -= *e * (inner(&u, e) * s);
            }
        }
        let n = u.quad();
        if n.abs() <= TOL * scale * scale {
            return Err(GeomError::DegenerateSpan {
                step,
                norm: n.abs() / (scale * scale),
            });
        }
        let s = n.signum();
        out.push(u / n.abs().sqrt());
        signs.push(s);
    }
    Ok(LorentzBasis {
        vectors: out,
        signs,
    })
}

/// Orthonormal basis of `span(vectors)` (not flag preserving), positive vectors first.
///
/// Built from the eigen-decomposition of the Gram matrix, so it copes with spans
/// whose given generators are null. Degenerate subspaces are rejected.
pub fn orthonormal_basis(vectors: &[LorentzVector]) -> Result<LorentzBasis> {
    let k = vectors.len();
    // euclidean-orthonormal generators first, to keep the Gram matrix well scaled
    let gens = euclidean_orthonormalize(vectors)?;
    if gens.len() < k {
        return Err(GeomError::RankDeficient {
            expected: k,
            found: gens.len(),
        });
    }
    let gram = DMatrix::from_fn(k, k, |i, j| inner(&gens[i], &gens[j]));
    let eig = SymmetricEigen::new(gram);
    let mut pairs: Vec<(f64, LorentzVector)> = (0..k)
        .map(|c| {
            let v: LorentzVector = (0..k).map(|i| gens[i] * eig.eigenvectors[(i, c)]).sum();
            (eig.eigenvalues[c], v)
        })
        .collect();
    let big = pairs.iter().fold(0.0_f64, |m, p| m.max(p.0.abs()));
    for (step, p) in pairs.iter().enumerate() {
        if p.0.abs() <= 1e-10 * big.max(1e-300) {
            return Err(GeomError::DegenerateSpan {
                step,
                norm: p.0.abs(),
            });
        }
    }
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let vectors = pairs.iter().map(|(l, v)| *v / l.abs().sqrt()).collect();
    let signs = pairs.iter().map(|(l, _)| l.signum()).collect();
    Ok(LorentzBasis { vectors, signs })
}

fn euclidean_orthonormalize(vectors: &[LorentzVector]) -> Result<Vec<LorentzVector>> {
    let scale = vectors.iter().fold(0.0_f64, |m, v| m.max(v.norm_euclid()));
    let mut out: Vec<LorentzVector> = Vec::new();
    for v in vectors {
        if !v.is_finite() {
            return Err(GeomError::NonFinite);
        }
        let mut u = *v;
        for _ in 0..2 {
            for e in &out {
                u -= *e * u.euclid_dot(e);
            }
        }
        let n = u.norm_euclid();
        if n > 1e-10 * scale {
            out.push(u / n);
        }
    }
    Ok(out)
}

/// Basis of `{w : <w,vᵢ> = 0 ∀i}` (euclidean-orthonormal, not Lorentz-normalized).
pub fn orthogonal_complement(vectors: &[LorentzVector]) -> Result<Vec<LorentzVector>> {
    let k = vectors.len();
    if k > 4 {
        return Err(GeomError::Precondition(format!(
            "at most 4 vectors, got {k}"
        )));
    }
    let lowered: Vec<_> = vectors.iter().map(LorentzVector::lowered).collect();
    let mut basis = euclidean_orthonormalize(&lowered)?;
    if basis.len() < k {
        return Err(GeomError::RankDeficient {
            expected: k,
            found: basis.len(),
        });
    }
    let mut complement = Vec::with_capacity(5 - k);
    while basis.len() < 5 {
        // the standard vector with the largest residual is the best-conditioned pick
        let best = (0..5)
            .map(|i| {
                let mut u = LorentzVector::basis(i);
                for _ in 0..2 {
                    for e in &basis {
                        u -= *e * u.euclid_dot(e);
                    }
                }
                u
            })
            .max_by(|a, b| a.norm_euclid().total_cmp(&b.norm_euclid()))
            .expect("five candidates");
        let u = best / best.norm_euclid();
        basis.push(u);
        complement.push(u);
    }
    Ok(complement)
}

/// A linear map of ℝ⁵ preserving the Lorentz form: `MᵀGM = G`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzTransform {
    matrix: Matrix5<f64>,
}

fn gram_matrix() -> Matrix5<f64> {
    Matrix5::from_diagonal(&Vector5::from(METRIC))
}

impl LorentzTransform {
    pub fn identity() -> Self {
        Self {
            matrix: Matrix5::identity(),
        }
    }

    /// Validates `MᵀGM = G` to `1e-10` (relative to the squared entry size).
    pub fn new(matrix: Matrix5<f64>) -> Result<Self> {
        let g = gram_matrix();
        let resid = (matrix.transpose() * g * matrix - g).amax();
        let scale = matrix.amax().max(1.0);
        if resid > 1e-10 * scale * scale {
            return Err(GeomError::Precondition(format!(
                "matrix does not preserve the Lorentz form (residual {resid:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix5<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &LorentzVector) -> LorentzVector {
        LorentzVector::from_vector5(&(self.matrix * x.to_vector5()))
    }

    /// `M⁻¹ = G Mᵀ G`.
    pub fn inverse(&self) -> Self {
        let g = gram_matrix();
        Self {
            matrix: g * self.matrix.transpose() * g,
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix * other.matrix,
        }
    }

    /// Time component of the image of e₅; `cosh` of the boost rapidity.
    pub fn boost_cosh(&self) -> f64 {
        self.matrix[(4, 4)]
    }

    pub fn form_residual(&self) -> f64 {
        let g = gram_matrix();
        (self.matrix.transpose() * g * self.matrix - g).amax()
    }
}

/// Upper bound on `cosh(rapidity)` accepted by [`random_lorentz_transform`].
pub const MAX_RANDOM_BOOST: f64 = 4.0;

/// Deterministic pseudo-random orientation-preserving Möbius transform:
/// determinant 1, future cone preserved.
///
/// Lorentz Gram–Schmidt on the columns of a seeded Gaussian matrix; draws that
/// pass close to a null direction, or whose boost exceeds [`MAX_RANDOM_BOOST`],
/// are redrawn from the same stream.
pub fn random_lorentz_transform(seed: u64) -> LorentzTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cols: Vec<LorentzVector> = (0..5)
            .map(|_| LorentzVector(std::array::from_fn(|_| StandardNormal.sample(&mut rng))))
            .collect();
        if let Some(t) = transform_from_columns(&cols) {
            return t;
        }
    }
}

fn transform_from_columns(cols: &[LorentzVector]) -> Option<LorentzTransform> {
    let mut basis: Vec<LorentzVector> = Vec::new();
    let mut signs: Vec<f64> = Vec::new();
    for v in cols {
        let mut u = *v;
        for _ in 0..2 {
            for (e, s) in basis.iter().zip(&signs) {
                u -= *e * (inner(&u, e) * s);
            }
        }
        let n = u.quad();
        if n.abs() < 0.05 * u.norm_euclid().powi(2) {
            return None;
        }
        basis.push(u / n.abs().sqrt());
        signs.push(n.signum());
    }
    let time_idx = signs.iter().position(|s| *s < 0.0)?;
    let mut time = basis.remove(time_idx);
    if time[4] < 0.0 {
        time = -time;
    }
    if time[4] > MAX_RANDOM_BOOST {
        return None;
    }
    if Matrix5::from_fn(|i, j| if j < 4 { basis[j].0[i] } else { time.0[i] }).determinant() < 0.0 {
        basis[0] = -basis[0];
    }
    basis.push(time);
    let m = Matrix5::from_fn(|i, j| basis[j].0[i]);
    LorentzTransform::new(m).ok()
}
