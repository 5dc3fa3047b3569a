//! Closed paths in de Sitter space Λ⁴ and the canal surfaces they envelop.

pub mod families;
pub mod involute;
pub mod mesh;

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use families::{
    dupin_cyclide_canal, minimal_drill, pencil_geodesic, random_path, CyclideCircle, GeodesicPath,
    MinimalDrill, RandomFamily, RandomPath,
};
pub use involute::{involute, Involute};
pub use mesh::{envelope_mesh, CircleSweep, MeshReport, TriMesh};

use crate::curves::{ArcLengthTable, PeriodicCurve};
use crate::error::{GeomError, Result};
use crate::lorentz::{causal_type, inner, CausalType, LorentzVector, DEFAULT_CAUSAL_TOL};
use crate::quadrature::integrate;
use crate::spheremodel::{CircleRep, SpherePoint};

/// A closed path with second-order jets: `[σ(t), σ'(t), σ''(t)]`.
pub trait LorentzPath: Send + Sync {
    fn period(&self) -> f64;
    fn jet(&self, t: f64) -> [LorentzVector; 3];
}

impl LorentzPath for PeriodicCurve {
    fn period(&self) -> f64 {
        PeriodicCurve::period(self)
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        let rows = PeriodicCurve::jet(self, t, 2);
        std::array::from_fn(|i| LorentzVector(std::array::from_fn(|c| rows[i][c])))
    }
}

/// Jet of `ν/√<ν,ν>` from the jet `[ν, ν', ν'']` of a space-like curve.
pub fn unit_jet(nu: &[LorentzVector; 3]) -> [LorentzVector; 3] {
    let [n0, n1, n2] = *nu;
    let q = n0.quad();
    let q1 = 2.0 * inner(&n0, &n1);
    let q2 = 2.0 * n1.quad() + 2.0 * inner(&n0, &n2);
    let a = q.powf(-0.5);
    let b = q.powf(-1.5);
    let c = q.powf(-2.5);
    [
        n0 * a,
        n1 * a - n0 * (0.5 * b * q1),
        n2 * a - n1 * (b * q1) + n0 * (0.75 * c * q1 * q1) - n0 * (0.5 * b * q2),
    ]
}

/// `k_g = σ + σ̈` from a jet in an arbitrary regular parameter.
///
/// With `v² = <σ',σ'>`, the arc-length second derivative is
/// `(σ'' − (<σ',σ''>/v²) σ')/v²`.
pub fn geodesic_curvature_from_jet(jet: &[LorentzVector; 3]) -> LorentzVector {
    let [s, d1, d2] = *jet;
    let v2 = d1.quad();
    s + (d2 - d1 * (inner(&d1, &d2) / v2)) / v2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanalSample {
    pub t: f64,
    pub sigma: LorentzVector,
    pub tangent: LorentzVector,
    pub tangent_type: CausalType,
    /// Geodesic curvature vector; `None` where the tangent is not space-like.
    pub kg: Option<LorentzVector>,
}

/// A closed path in Λ⁴ with its causal profile and arc-length table.
#[derive(Clone)]
pub struct CanalPath {
    path: Arc<dyn LorentzPath>,
    samples: Vec<CanalSample>,
    table: Option<ArcLengthTable>,
}

impl std::fmt::Debug for CanalPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CanalPath")
            .field("period", &self.period())
            .field("grid", &self.samples.len())
            .finish()
    }
}

/// Default grid size of analytic paths.
pub const DEFAULT_GRID: usize = 512;

impl CanalPath {
    /// Profiles `path` on `grid` uniform parameters.
    ///
    /// Fails unless `|<σ,σ> − 1| < 1e-9` and `<σ,σ'> ≈ 0` on the grid.
    pub fn new(path: Arc<dyn LorentzPath>, grid: usize) -> Result<Self> {
        if grid < 4 {
            return Err(GeomError::TooFewSamples { min: 4, got: grid });
        }
        let period = path.period();
        let mut samples = Vec::with_capacity(grid);
        for j in 0..grid {
            let t = period * j as f64 / grid as f64;
            let jet = path.jet(t);
            if !jet.iter().all(LorentzVector::is_finite) {
                return Err(GeomError::NonFinite);
            }
            let q = jet[0].quad();
            if (q - 1.0).abs() > 1e-9 {
                return Err(GeomError::NotOnDeSitter(q));
            }
            let drift = inner(&jet[0], &jet[1]).abs();
            if drift > 1e-8 * jet[0].norm_inf() * jet[1].norm_inf().max(1.0) {
                return Err(GeomError::Precondition(format!(
                    "<sigma, sigma'> = {drift:.3e} at t = {t}"
                )));
            }
            let tangent_type = causal_type(&jet[1], DEFAULT_CAUSAL_TOL);
            let kg =
                (tangent_type == CausalType::Spacelike).then(|| geodesic_curvature_from_jet(&jet));
            samples.push(CanalSample {
                t,
                sigma: jet[0],
                tangent: jet[1],
                tangent_type,
                kg,
            });
        }
        let table = samples
            .iter()
            .all(|s| s.tangent_type == CausalType::Spacelike)
            .then(|| ArcLengthTable::build(grid, period, 1e-13, |t| speed(path.as_ref(), t)));
        Ok(Self {
            path,
            samples,
            table,
        })
    }

    pub fn from_path<P: LorentzPath + 'static>(path: P, grid: usize) -> Result<Self> {
        Self::new(Arc::new(path), grid)
    }

    /// Sampled path in ℝ⁵ (the grid is the sample grid).
    pub fn from_curve(curve: PeriodicCurve) -> Result<Self> {
        if curve.dim() != 5 {
            return Err(GeomError::Dimension {
                expected: 5,
                got: curve.dim(),
            });
        }
        let n = curve.len();
        Self::new(Arc::new(curve), n)
    }

    pub fn period(&self) -> f64 {
        self.path.period()
    }

    pub fn path(&self) -> &Arc<dyn LorentzPath> {
        &self.path
    }

    pub fn samples(&self) -> &[CanalSample] {
        &self.samples
    }

    pub fn jet(&self, t: f64) -> [LorentzVector; 3] {
        self.path.jet(t)
    }

    pub fn sigma(&self, t: f64) -> LorentzVector {
        self.path.jet(t)[0]
    }

    pub fn is_spacelike(&self) -> bool {
        self.table.is_some()
    }

    fn require_spacelike(&self) -> Result<&ArcLengthTable> {
        self.table.as_ref().ok_or_else(|| {
            let t = self
                .samples
                .iter()
                .find(|s| s.tangent_type != CausalType::Spacelike)
                .map_or(0.0, |s| s.t);
            GeomError::NonSpacelikeTangent { t }
        })
    }

    /// `∫ √<σ',σ'> dt` by adaptive Gauss–Kronrod quadrature.
    pub fn length_with_tol(&self, rel_tol: f64) -> Result<f64> {
        self.require_spacelike()?;
        let n = self.samples.len().min(64);
        let q = integrate(
            |t| speed(self.path.as_ref(), t),
            0.0,
            self.period(),
            rel_tol,
            0.0,
            n,
            200_000,
        );
        Ok(q.value)
    }

    pub fn length(&self) -> Result<f64> {
        self.length_with_tol(1e-10)
    }

    /// Parameter at arc length `s` (taken modulo the total length).
    pub fn param_at_arclength(&self, s: f64) -> Result<f64> {
        let table = self.require_spacelike()?;
        let total = table.total();
        let s = s.rem_euclid(total);
        Ok(table.param_at(s, &|t| speed(self.path.as_ref(), t)))
    }

    pub fn arclength_at_param(&self, t: f64) -> Result<f64> {
        let table = self.require_spacelike()?;
        let t = t.rem_euclid(self.period());
        Ok(table.arc_length(t, &|t| speed(self.path.as_ref(), t)))
    }

    /// Arc-length jet `[σ, σ̇, σ̈]` at parameter `t`.
    pub fn unit_speed_jet(&self, t: f64) -> Result<[LorentzVector; 3]> {
        let [s, d1, d2] = self.path.jet(t);
        let v2 = d1.quad();
        if !(v2 > 0.0) {
            return Err(GeomError::NonSpacelikeTangent { t });
        }
        let v = v2.sqrt();
        let dv = inner(&d1, &d2) / v;
        Ok([s, d1 / v, (d2 - d1 * (dv / v)) / v2])
    }

    /// Geodesic curvature vector at parameter `t`.
    pub fn kg_at_param(&self, t: f64) -> Result<LorentzVector> {
        let [s, _, dd] = self.unit_speed_jet(t)?;
        Ok(s + dd)
    }

    /// Geodesic curvature vector `σ + σ̈` at arc length `s`.
    pub fn geodesic_curvature_vector(&self, s: f64) -> Result<LorentzVector> {
        self.kg_at_param(self.param_at_arclength(s)?)
    }

    /// Characteristic circle `span(σ(t), σ'(t))⊥ ∩ C`.
    pub fn characteristic_circle(&self, t: f64) -> Result<CircleRep> {
        let [s, d1, _] = self.path.jet(t);
        if causal_type(&d1, DEFAULT_CAUSAL_TOL) != CausalType::Spacelike {
            return Err(GeomError::NonSpacelikeTangent { t });
        }
        CircleRep::new(SpherePoint::normalize(s)?, SpherePoint::normalize(d1)?)
    }
}

fn speed(path: &dyn LorentzPath, t: f64) -> f64 {
    path.jet(t)[1].quad().max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `k_g` time-like everywhere.
    Regular,
    /// `k_g` nonzero and nowhere space-like, with both causal types present.
    AlmostRegular,
    /// `k_g` light-like and nonzero everywhere.
    Drill,
    /// `k_g` vanishes everywhere.
    Geodesic,
    /// `k_g` space-like everywhere.
    Singular,
    /// Tangent not space-like somewhere.
    NotCanal,
    /// Any other mixture of causal types of `k_g`.
    Mixed,
}

impl Verdict {
    /// Regular, almost regular or drill: the hypothesis of the length bound.
    pub fn is_almost_regular(self) -> bool {
        matches!(self, Self::Regular | Self::AlmostRegular | Self::Drill)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalCounts {
    pub spacelike: usize,
    pub timelike: usize,
    pub lightlike: usize,
    pub zero: usize,
}

impl CausalCounts {
    fn add(&mut self, c: CausalType) {
        match c {
            CausalType::Spacelike => self.spacelike += 1,
            CausalType::Timelike => self.timelike += 1,
            CausalType::Lightlike => self.lightlike += 1,
            CausalType::Zero => self.zero += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.spacelike + self.timelike + self.lightlike + self.zero
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanalClassification {
    pub verdict: Verdict,
    pub tangent_types: CausalCounts,
    pub kg_types: CausalCounts,
    /// Extremes of `<k_g,k_g>` over the grid.
    pub min_kg_quad: f64,
    pub max_kg_quad: f64,
    /// Smallest `|<k_g,k_g>| / ‖k_g‖∞²`.
    pub min_relative_kg_quad: f64,
    /// Smallest `‖k_g‖∞`.
    pub min_kg_norm: f64,
    pub max_kg_norm: f64,
    /// Smallest `<σ',σ'>`.
    pub min_tangent_quad: f64,
    pub tol: f64,
}

/// Classifies a path by the causal types of its tangent and `k_g` on the grid.
pub fn classify(path: &CanalPath, tol: f64) -> CanalClassification {
    let mut tangent_types = CausalCounts::default();
    let mut kg_types = CausalCounts::default();
    let mut c = CanalClassification {
        verdict: Verdict::Mixed,
        tangent_types,
        kg_types,
        min_kg_quad: f64::INFINITY,
        max_kg_quad: f64::NEG_INFINITY,
        min_relative_kg_quad: f64::INFINITY,
        min_kg_norm: f64::INFINITY,
        max_kg_norm: 0.0,
        min_tangent_quad: f64::INFINITY,
        tol,
    };
    for s in &path.samples {
        tangent_types.add(causal_type(&s.tangent, tol));
        c.min_tangent_quad = c.min_tangent_quad.min(s.tangent.quad());
        if let Some(kg) = s.kg {
            kg_types.add(causal_type(&kg, tol));
            let q = kg.quad();
            let n = kg.norm_inf();
            c.min_kg_quad = c.min_kg_quad.min(q);
            c.max_kg_quad = c.max_kg_quad.max(q);
            c.min_kg_norm = c.min_kg_norm.min(n);
            c.max_kg_norm = c.max_kg_norm.max(n);
            if n > 0.0 {
                c.min_relative_kg_quad = c.min_relative_kg_quad.min(q.abs() / (n * n));
            }
        }
    }
    let n = path.samples.len();
    c.verdict = if tangent_types.spacelike < n || kg_types.total() < n {
        Verdict::NotCanal
    } else if kg_types.zero == n {
        Verdict::Geodesic
    } else if kg_types.timelike == n {
        Verdict::Regular
    } else if kg_types.lightlike == n {
        Verdict::Drill
    } else if kg_types.spacelike == n {
        Verdict::Singular
    } else if kg_types.timelike + kg_types.lightlike == n {
        Verdict::AlmostRegular
    } else {
        Verdict::Mixed
    };
    c.tangent_types = tangent_types;
    c.kg_types = kg_types;
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub verdict: BoundVerdict,
    pub classification: Verdict,
    pub length: Option<f64>,
    /// `length − 2π`.
    pub margin: Option<f64>,
    pub equality_family_detected: bool,
    /// Largest deviation of the normalized `k_g` direction from its value at `t = 0`.
    pub direction_deviation: f64,
    pub tol: f64,
}

/// Tolerance on the normalized direction of `k_g` for the equality case.
pub const DIRECTION_TOL: f64 = 1e-6;

fn normalized_direction(v: &LorentzVector) -> LorentzVector {
    let n = v.norm_inf();
    let lead =
        v.0.iter()
            .cloned()
            .fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
    *v / (n * lead.signum())
}

/// Checks `ℓ ≥ 2π − tol` on almost-regular closed paths and detects the equality family.
pub fn verify_2pi_bound(path: &CanalPath, tol: f64) -> BoundReport {
    let class = classify(path, DEFAULT_CAUSAL_TOL);
    let length = path.length().ok();
    let margin = length.map(|l| l - TAU);
    let kgs: Vec<LorentzVector> = path.samples.iter().filter_map(|s| s.kg).collect();
    let direction_deviation = match kgs.first() {
        Some(k0) if kgs.len() == path.samples.len() && k0.norm_inf() > 0.0 => {
            let d0 = normalized_direction(k0);
            kgs.iter()
                .map(|k| (normalized_direction(k) - d0).norm_inf())
                .fold(0.0, f64::max)
        }
        _ => f64::INFINITY,
    };
    let equality_family_detected =
        class.verdict == Verdict::Drill && direction_deviation <= DIRECTION_TOL;
    let verdict = match (class.verdict.is_almost_regular(), margin) {
        (true, Some(m)) if m >= -tol => BoundVerdict::Pass,
        (true, _) => BoundVerdict::Fail,
        (false, _) => BoundVerdict::NotApplicable,
    };
    BoundReport {
        verdict,
        classification: class.verdict,
        length,
        margin,
        equality_family_detected,
        direction_deviation,
        tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> LorentzVector {
        LorentzVector::basis(i)
    }

    #[test]
    fn unit_jet_matches_finite_differences() {
        let nu = |t: f64| e(0) * (2.0 + t.sin()) + e(1) * t.cos() + e(4) * (0.5 * t).sin();
        let t = 0.4;
        let h = 1e-3;
        let d = |t: f64| (nu(t + h) - nu(t - h)) / (2.0 * h);
        let dd = |t: f64| (nu(t + h) - nu(t) * 2.0 + nu(t - h)) / (h * h);
        let jet = unit_jet(&[nu(t), d(t), dd(t)]);
        let s = |t: f64| nu(t) / nu(t).quad().sqrt();
        let fd1 = (s(t + h) - s(t - h)) / (2.0 * h);
        let fd2 = (s(t + h) - s(t) * 2.0 + s(t - h)) / (h * h);
        assert!((jet[0].quad() - 1.0).abs() < 1e-14);
        assert!((jet[1] - fd1).norm_inf() < 1e-5);
        assert!((jet[2] - fd2).norm_inf() < 1e-5);
    }

    #[test]
    fn geodesic_has_zero_curvature() {
        let p = CanalPath::from_path(pencil_geodesic(e(0), e(1)).unwrap(), 64).unwrap();
        assert!((p.length().unwrap() - TAU).abs() < 1e-12);
        for s in p.samples() {
            assert!(s.kg.unwrap().norm_inf() < 1e-12);
        }
        assert_eq!(classify(&p, 1e-8).verdict, Verdict::Geodesic);
    }

    #[test]
    fn nested_family_is_not_a_canal() {
        struct Nested;
        impl LorentzPath for Nested {
            fn period(&self) -> f64 {
                TAU
            }
            fn jet(&self, t: f64) -> [LorentzVector; 3] {
                // σ = (cosh a, 0, 0, 0, sinh a)·… with a = 0.3 sin t: a time-like family
                let a = 0.3 * t.sin();
                let (da, dda) = (0.3 * t.cos(), -0.3 * t.sin());
                let s = e(0) * a.cosh() + e(4) * a.sinh();
                let ds = (e(0) * a.sinh() + e(4) * a.cosh()) * da;
                let dds = (e(0) * a.cosh() + e(4) * a.sinh()) * (da * da)
                    + (e(0) * a.sinh() + e(4) * a.cosh()) * dda;
                [s, ds, dds]
            }
        }
        let p = CanalPath::from_path(Nested, 64).unwrap();
        assert_eq!(classify(&p, 1e-8).verdict, Verdict::NotCanal);
        assert!(matches!(
            p.length(),
            Err(GeomError::NonSpacelikeTangent { .. })
        ));
        assert_eq!(
            verify_2pi_bound(&p, 1e-6).verdict,
            BoundVerdict::NotApplicable
        );
    }
}
