use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::canal::{unit_jet, CanalPath, LorentzPath};
use crate::curves::{detect_vertices, frenet_apparatus, lightcone_jet, PeriodicCurve};
use crate::error::{GeomError, Result};
use crate::lorentz::{inner, wedge4, LorentzVector};
use crate::quadrature::brent_root;
use crate::spheremodel::contact_order;

/// Osculating spheres of a space curve as a path in Λ⁴.
///
/// `ν = γ∧γ'∧γ''∧γ'''` over the polynomial light-cone section
/// `γ = (2x, |x|²−1, |x|²+1)`, normalized to `<σ,σ> = 1`.
#[derive(Debug, Clone)]
pub struct OsculatingPath {
    curve: PeriodicCurve,
}

impl OsculatingPath {
    pub fn new(curve: PeriodicCurve) -> Result<Self> {
        if curve.dim() != 3 {
            return Err(GeomError::Dimension {
                expected: 3,
                got: curve.dim(),
            });
        }
        Ok(Self { curve })
    }

    pub fn curve(&self) -> &PeriodicCurve {
        &self.curve
    }

    /// `[ν, ν', ν'']`.
    pub fn nu_jet(&self, t: f64) -> [LorentzVector; 3] {
        let g = lightcone_jet(&self.curve, t, 5).expect("space curve");
        [
            wedge4(&g[0], &g[1], &g[2], &g[3]),
            wedge4(&g[0], &g[1], &g[2], &g[4]),
            wedge4(&g[0], &g[1], &g[3], &g[4]) + wedge4(&g[0], &g[1], &g[2], &g[5]),
        ]
    }
}

impl LorentzPath for OsculatingPath {
    fn period(&self) -> f64 {
        self.curve.period()
    }

    fn jet(&self, t: f64) -> [LorentzVector; 3] {
        unit_jet(&self.nu_jet(t))
    }
}

/// The osculating-sphere canal of a vertex-free closed curve.
#[derive(Debug, Clone)]
pub struct OsculatingCanal {
    pub canal: CanalPath,
    path: Arc<OsculatingPath>,
    /// `σ(L) = +σ(0)`.
    pub coherent: bool,
    /// `‖σ(L) − σ(0)‖∞`.
    pub closure_residual: f64,
    /// Smallest `<ν,ν>/‖ν‖∞²` on the grid.
    pub min_relative_nu_quad: f64,
}

impl OsculatingCanal {
    pub fn curve(&self) -> &PeriodicCurve {
        self.path.curve()
    }

    pub fn path(&self) -> &OsculatingPath {
        &self.path
    }

    pub fn sigma_jet(&self, t: f64) -> [LorentzVector; 3] {
        self.path.jet(t)
    }
}

/// Builds the osculating canal; the curve must be vertex-free.
pub fn osculating_canal(x: &PeriodicCurve) -> Result<OsculatingCanal> {
    let frenet = frenet_apparatus(x)?;
    let vertices = detect_vertices(&frenet, super::VERTEX_TOL);
    if !vertices.vertex_free {
        let t = vertices.vertices.first().copied().unwrap_or(0.0);
        return Err(GeomError::Vertex {
            t,
            margin: vertices.margin,
        });
    }
    osculating_canal_unchecked(x)
}

/// Osculating canal without the vertex scan; `<ν,ν> > 0` is still enforced on the grid.
pub fn osculating_canal_unchecked(x: &PeriodicCurve) -> Result<OsculatingCanal> {
    let path = Arc::new(OsculatingPath::new(x.clone())?);
    let mut min_rel = f64::INFINITY;
    for t in x.params() {
        let nu = path.nu_jet(t)[0];
        let rel = nu.quad() / nu.norm_inf().powi(2);
        if !(rel > 1e-12) {
            return Err(GeomError::Vertex { t, margin: rel });
        }
        min_rel = min_rel.min(rel);
    }
    let s0 = path.jet(0.0)[0];
    let s1 = path.jet(x.period())[0];
    let coherent = inner(&s0, &s1) > 0.0;
    if !coherent {
        return Err(GeomError::OrientationIncoherent);
    }
    let canal = CanalPath::new(path.clone(), x.len())?;
    Ok(OsculatingCanal {
        canal,
        path,
        coherent,
        closure_residual: (s1 - s0).norm_inf(),
        min_relative_nu_quad: min_rel,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrillReport {
    pub tested_points: usize,
    /// Grid points skipped because `σ'` nearly vanishes there.
    pub excluded_points: usize,
    /// Largest `|<k_g,k_g>| / ‖k_g‖∞²`.
    pub max_light_margin: f64,
    /// Smallest `‖k_g‖∞ / ‖σ‖∞`.
    pub min_kg_norm: f64,
    /// Largest angle between the lines `span(k_g)` and `span(γ)`, radians.
    pub max_angle: f64,
    pub tol: f64,
    pub angle_tol: f64,
    pub pass: bool,
}

/// Relative size of `‖σ'‖∞` below which a point is treated as spherical.
pub const SPHERICAL_EXCLUSION: f64 = 1e-3;

/// Checks that `k_g` is light-like, nonzero and spans the curve point.
pub fn drill_check(oc: &OsculatingCanal, tol: f64, angle_tol: f64) -> DrillReport {
    drill_check_path(&oc.canal, oc.curve(), tol, angle_tol)
}

/// [`drill_check`] for an arbitrary path against the lift of `curve`.
pub fn drill_check_path(
    path: &CanalPath,
    curve: &PeriodicCurve,
    tol: f64,
    angle_tol: f64,
) -> DrillReport {
    let params = curve.params();
    let jets: Vec<_> = params.iter().map(|&t| path.jet(t)).collect();
    let max_speed = jets.iter().map(|j| j[1].norm_inf()).fold(0.0, f64::max);
    let mut r = DrillReport {
        tested_points: 0,
        excluded_points: 0,
        max_light_margin: 0.0,
        min_kg_norm: f64::INFINITY,
        max_angle: 0.0,
        tol,
        angle_tol,
        pass: false,
    };
    for (t, jet) in params.iter().zip(&jets) {
        if jet[1].norm_inf() <= SPHERICAL_EXCLUSION * max_speed || !(jet[1].quad() > 0.0) {
            r.excluded_points += 1;
            continue;
        }
        r.tested_points += 1;
        let kg = crate::canal::geodesic_curvature_from_jet(jet);
        let n = kg.norm_inf();
        r.max_light_margin = r.max_light_margin.max(kg.quad().abs() / (n * n));
        r.min_kg_norm = r.min_kg_norm.min(n / jet[0].norm_inf());
        let gamma = lightcone_jet(curve, *t, 0).expect("space curve")[0];
        r.max_angle = r.max_angle.max(kg.line_angle(&gamma));
    }
    r.pass = r.tested_points > 0
        && r.max_light_margin < tol
        && r.min_kg_norm > 0.0
        && r.max_angle < angle_tol;
    r
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub t: f64,
    /// `‖σ'(t)‖∞ / max ‖σ'‖∞`.
    pub relative_speed: f64,
    /// Contact order of `σ(t)` with the lifted curve (derivatives up to 5).
    pub contact_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalReport {
    pub points: Vec<SphericalPoint>,
    /// `σ' ≡ 0`: the curve lies on one sphere and every grid point is reported.
    pub all: bool,
    pub max_speed: f64,
    pub tol: f64,
}

impl SphericalReport {
    pub fn params(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }
}

/// Normalized `<σ, γ''''>`; `σ'` vanishes exactly where it does.
pub fn spherical_indicator(oc: &OsculatingCanal, t: f64) -> f64 {
    let g = lightcone_jet(oc.curve(), t, 4).expect("space curve");
    let s = oc.path.jet(t)[0];
    inner(&s, &g[4]) / (s.norm_inf() * g[4].norm_inf())
}

/// Zeros of `σ'`: sign changes of `<σ, γ''''>` refined by Brent, kept when
/// `‖σ'‖∞ ≤ tol·max‖σ'‖∞` there.
pub fn detect_spherical_points(oc: &OsculatingCanal, tol: f64) -> SphericalReport {
    let x = oc.curve();
    let params = x.params();
    let speed = |t: f64| oc.path.jet(t)[1].norm_inf();
    let speeds: Vec<f64> = params.iter().map(|&t| speed(t)).collect();
    let max_speed = speeds.iter().cloned().fold(0.0, f64::max);
    let scale = oc.path.jet(0.0)[0].norm_inf();
    let point = |t: f64| {
        let jet = lightcone_jet(x, t, 5).expect("space curve");
        SphericalPoint {
            t,
            relative_speed: if max_speed > 0.0 {
                speed(t) / max_speed
            } else {
                0.0
            },
            contact_order: contact_order(&jet, &oc.path.jet(t)[0], 1e-8),
        }
    };
    if max_speed <= 1e-8 * scale {
        return SphericalReport {
            points: params.iter().map(|&t| point(t)).collect(),
            all: true,
            max_speed,
            tol,
        };
    }
    let g: Vec<f64> = params.iter().map(|&t| spherical_indicator(oc, t)).collect();
    let n = params.len();
    let h = x.period() / n as f64;
    let mut points = Vec::new();
    for j in 0..n {
        let (a, b) = (g[j], g[(j + 1) % n]);
        if a == 0.0 || a.signum() != b.signum() {
            let t0 = params[j];
            let Some(t) = brent_root(
                |t| spherical_indicator(oc, t),
                t0,
                t0 + h,
                1e-14 * x.period(),
                200,
            ) else {
                continue;
            };
            if speed(t) <= tol * max_speed {
                points.push(point(t.rem_euclid(x.period())));
            }
        }
    }
    SphericalReport {
        points,
        all: false,
        max_speed,
        tol,
    }
}
