use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::periodic::PeriodicCurve;
use crate::error::{GeomError, Result};
use crate::quadrature::{gauss_kronrod_15, golden_minimum, integrate};
use crate::spheremodel::{EuclideanSphere, Orientation};

/// Frenet apparatus at one parameter. Primes are arc-length derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetPoint {
    pub t: f64,
    pub position: [f64; 3],
    /// `|x'(t)|`.
    pub speed: f64,
    /// `d|x'|/dt`.
    pub speed_dt: f64,
    pub tangent: [f64; 3],
    pub normal: [f64; 3],
    pub binormal: [f64; 3],
    pub k: f64,
    pub tau: f64,
    pub dk: f64,
    pub ddk: f64,
    pub dtau: f64,
}

fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Frenet data from `x, x', x'', x''', x''''` at one parameter.
///
/// `τ = (x'×x'')·x''' / |x'×x''|²`. Returns non-finite values at inflections.
pub fn frenet_from_jet(t: f64, jet: &[Vector3<f64>]) -> FrenetPoint {
    assert!(jet.len() >= 5, "need derivatives up to order 4");
    let (x, a, b, c, d) = (jet[0], jet[1], jet[2], jet[3], jet[4]);
    let w = a.cross(&b);
    let w1 = a.cross(&c);
    let w2 = b.cross(&c) + a.cross(&d);

    let v = a.norm();
    let v1 = a.dot(&b) / v;
    let v2 = (b.dot(&b) + a.dot(&c)) / v - a.dot(&b).powi(2) / v.powi(3);

    let ww = w.norm();
    let ww1 = w.dot(&w1) / ww;
    let ww2 = (w1.dot(&w1) + w.dot(&w2)) / ww - w.dot(&w1).powi(2) / ww.powi(3);

    let k = ww / v.powi(3);
    let k_t = ww1 / v.powi(3) - 3.0 * ww * v1 / v.powi(4);
    let k_tt = ww2 / v.powi(3) - 6.0 * ww1 * v1 / v.powi(4) - 3.0 * ww * v2 / v.powi(4)
        + 12.0 * ww * v1 * v1 / v.powi(5);

    let wc = w.dot(&c);
    let tau = wc / (ww * ww);
    let tau_t = w.dot(&d) / (ww * ww) - 2.0 * wc * ww1 / ww.powi(3);

    let tangent = a / v;
    let binormal = w / ww;
    let normal = binormal.cross(&tangent);
    FrenetPoint {
        t,
        position: arr(&x),
        speed: v,
        speed_dt: v1,
        tangent: arr(&tangent),
        normal: arr(&normal),
        binormal: arr(&binormal),
        k,
        tau,
        dk: k_t / v,
        ddk: k_tt / (v * v) - k_t * v1 / v.powi(3),
        dtau: tau_t / v,
    }
}

/// Frenet apparatus of a space curve at an arbitrary parameter.
pub fn frenet_at(curve: &PeriodicCurve, t: f64) -> Result<FrenetPoint> {
    Ok(frenet_from_jet(t, &curve.jet3(t, 4)?))
}

/// Cumulative arc length on the uniform parameter grid of a periodic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcLengthTable {
    period: f64,
    /// `cumulative[j] = ∫₀^{t_j} speed`, with `N + 1` entries.
    cumulative: Vec<f64>,
}

impl ArcLengthTable {
    /// Integrates `speed` panel by panel over the `n`-point grid of `[0, period]`.
    pub fn build<F: Fn(f64) -> f64>(n: usize, period: f64, rel_tol: f64, speed: F) -> Self {
        let mut cumulative = Vec::with_capacity(n + 1);
        cumulative.push(0.0);
        let h = period / n as f64;
        let mut acc = 0.0;
        for j in 0..n {
            let q = integrate(
                &speed,
                h * j as f64,
                h * (j + 1) as f64,
                rel_tol,
                0.0,
                1,
                64,
            );
            acc += q.value;
            cumulative.push(acc);
        }
        Self { period, cumulative }
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Arc length from 0 to grid point `j`.
    pub fn at_grid(&self, j: usize) -> f64 {
        self.cumulative[j]
    }

    fn step(&self) -> f64 {
        self.period / (self.cumulative.len() - 1) as f64
    }

    /// Arc length from 0 to `t ∈ [0, period]`.
    pub fn arc_length<F: Fn(f64) -> f64>(&self, t: f64, speed: &F) -> f64 {
        let h = self.step();
        let j = ((t / h).floor() as usize).min(self.cumulative.len() - 2);
        let t0 = h * j as f64;
        if t == t0 {
            return self.cumulative[j];
        }
        self.cumulative[j] + gauss_kronrod_15(speed, t0, t).0
    }

    /// Parameter `t` with arc length `s`, by safeguarded Newton inside the grid panel.
    pub fn param_at<F: Fn(f64) -> f64>(&self, s: f64, speed: &F) -> f64 {
        let h = self.step();
        let n = self.cumulative.len() - 1;
        let j = match self.cumulative.binary_search_by(|c| c.total_cmp(&s)) {
            Ok(j) => return h * j as f64,
            Err(j) => j.clamp(1, n) - 1,
        };
        let (lo, hi) = (h * j as f64, h * (j + 1) as f64);
        let (s_lo, s_hi) = (self.cumulative[j], self.cumulative[j + 1]);
        let mut t = lo + (s - s_lo) / (s_hi - s_lo) * h;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..50 {
            let f = self.cumulative[j] + gauss_kronrod_15(speed, lo, t).0 - s;
            if f > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let mut next = t - f / speed(t);
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() <= 1e-15 * self.period.max(1.0) {
                return next;
            }
            t = next;
        }
        t
    }
}

/// Speed function `|x'(t)|` of a curve.
pub fn speed_fn(curve: &PeriodicCurve) -> impl Fn(f64) -> f64 + '_ {
    move |t| {
        curve
            .derivative(t, 1)
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }
}

fn check_regular(curve: &PeriodicCurve) -> Result<()> {
    let speed = speed_fn(curve);
    let sp: Vec<f64> = curve.params().into_iter().map(&speed).collect();
    let max = sp.iter().cloned().fold(0.0, f64::max);
    let (j, min) = sp
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    if !(min > 1e-8 * max) {
        return Err(GeomError::IrregularCurve {
            t: curve.param(j),
            speed: min,
        });
    }
    Ok(())
}

/// Arc length of a closed curve by adaptive Gauss–Kronrod quadrature.
pub fn curve_length(curve: &PeriodicCurve, rel_tol: f64) -> f64 {
    ArcLengthTable::build(curve.len(), curve.period(), rel_tol, speed_fn(curve)).total()
}

/// Unit-speed reparametrization on the same number of samples.
pub fn arclength_reparametrize(curve: &PeriodicCurve) -> Result<PeriodicCurve> {
    check_regular(curve)?;
    let speed = speed_fn(curve);
    let table = ArcLengthTable::build(curve.len(), curve.period(), 1e-14, &speed);
    let total = table.total();
    let n = curve.len();
    let rows = (0..n)
        .map(|j| {
            let s = total * j as f64 / n as f64;
            curve.eval(table.param_at(s, &speed))
        })
        .collect();
    PeriodicCurve::from_samples(rows, total)
}

/// Frenet apparatus on the sample grid of a closed space curve.
#[derive(Debug, Clone)]
pub struct FrenetData {
    curve: PeriodicCurve,
    pub points: Vec<FrenetPoint>,
    /// Arc length at each sample.
    pub arc_length: Vec<f64>,
    pub total_length: f64,
}

impl FrenetData {
    pub fn curve(&self) -> &PeriodicCurve {
        &self.curve
    }

    pub fn k(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.k).collect()
    }

    pub fn tau(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.tau).collect()
    }

    /// `g = k'² + k²τ²` at each sample.
    pub fn vertex_function(&self) -> Vec<f64> {
        self.points.iter().map(vertex_function).collect()
    }
}

/// `k'² + k²τ²`, vanishing exactly at vertices.
pub fn vertex_function(p: &FrenetPoint) -> f64 {
    p.dk * p.dk + p.k * p.k * p.tau * p.tau
}

/// Frenet data on the grid of `curve`; rejects irregular curves and inflections.
pub fn frenet_apparatus(curve: &PeriodicCurve) -> Result<FrenetData> {
    if curve.dim() != 3 {
        return Err(GeomError::Dimension {
            expected: 3,
            got: curve.dim(),
        });
    }
    check_regular(curve)?;
    let points: Vec<FrenetPoint> = curve
        .params()
        .into_iter()
        .map(|t| frenet_at(curve, t))
        .collect::<Result<_>>()?;
    let kmax = points.iter().map(|p| p.k).fold(0.0, f64::max);
    if let Some(p) = points.iter().find(|p| !(p.k >= 1e-6 * kmax)) {
        return Err(GeomError::Inflection {
            t: p.t,
            curvature: p.k,
        });
    }
    let table = ArcLengthTable::build(curve.len(), curve.period(), 1e-13, speed_fn(curve));
    let arc_length = (0..curve.len()).map(|j| table.at_grid(j)).collect();
    Ok(FrenetData {
        curve: curve.clone(),
        points,
        arc_length,
        total_length: table.total(),
    })
}

/// Vertices (zeros of `k'² + k²τ²`) of a closed curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexReport {
    /// Parameters of the detected vertices.
    pub vertices: Vec<f64>,
    pub min_g: f64,
    pub max_g: f64,
    /// `min g / max g`; the curve is vertex-free iff this exceeds the tolerance.
    pub margin: f64,
    pub tol: f64,
    pub vertex_free: bool,
    /// `g` vanishes identically (circles).
    pub degenerate: bool,
}

/// Grid local minima of `g`, refined by golden section on the interpolant.
pub fn detect_vertices(f: &FrenetData, tol: f64) -> VertexReport {
    let g = f.vertex_function();
    let n = g.len();
    let max_g = g.iter().cloned().fold(0.0, f64::max);
    let kmax = f.points.iter().map(|p| p.k).fold(0.0, f64::max);
    let params = f.curve.params();
    if max_g <= tol * kmax.powi(4) {
        let min_g = g.iter().cloned().fold(f64::INFINITY, f64::min);
        return VertexReport {
            vertices: params,
            min_g,
            max_g,
            margin: 0.0,
            tol,
            vertex_free: false,
            degenerate: true,
        };
    }
    let h = f.curve.period() / n as f64;
    let gfun = |t: f64| {
        frenet_at(&f.curve, t)
            .map(|p| vertex_function(&p))
            .unwrap_or(f64::NAN)
    };
    let mut vertices = Vec::new();
    let mut min_g = g.iter().cloned().fold(f64::INFINITY, f64::min);
    for j in 0..n {
        let (prev, next) = (g[(j + n - 1) % n], g[(j + 1) % n]);
        if !(g[j] <= prev && g[j] < next) {
            continue;
        }
        let t0 = params[j];
        let (t, gv) = golden_minimum(gfun, t0 - h, t0 + h, 1e-10 * h);
        let gv = if gv.is_nan() { g[j] } else { gv.min(g[j]) };
        min_g = min_g.min(gv);
        if gv <= tol * max_g {
            vertices.push(t.rem_euclid(f.curve.period()));
        }
    }
    let margin = min_g / max_g;
    VertexReport {
        vertex_free: vertices.is_empty() && margin > tol,
        vertices,
        min_g,
        max_g,
        margin,
        tol,
        degenerate: false,
    }
}

/// Osculating circle at a sample of a space curve: centre, unit normal of its plane, radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanCircle {
    pub center: [f64; 3],
    pub normal: [f64; 3],
    pub radius: f64,
}

pub fn osculating_circle(p: &FrenetPoint) -> EuclideanCircle {
    let r = 1.0 / p.k;
    let center = std::array::from_fn(|i| p.position[i] + r * p.normal[i]);
    EuclideanCircle {
        center,
        normal: p.binormal,
        radius: r,
    }
}

/// Osculating sphere at parameter `t`.
///
/// Centre `x + N/k − k'/(k²τ) B`, radius `√(1/k² + k'²/(k⁴τ²))`, oriented so
/// that the bounded ball is positive.
pub fn osculating_sphere(curve: &PeriodicCurve, t: f64, tol: f64) -> Result<EuclideanSphere> {
    let p = frenet_at(curve, t)?;
    let g = vertex_function(&p);
    if !(g > tol * p.k.powi(4)) {
        return Err(GeomError::Vertex {
            t,
            margin: g / p.k.powi(4),
        });
    }
    if p.tau.abs() <= tol * p.k {
        return Err(GeomError::ZeroTorsion { t });
    }
    let a = 1.0 / p.k;
    let b = -p.dk / (p.k * p.k * p.tau);
    let center = std::array::from_fn(|i| p.position[i] + a * p.normal[i] + b * p.binormal[i]);
    EuclideanSphere::new(center, a.hypot(b), Orientation::Inward)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn helix_jet(t: f64) -> Vec<Vector3<f64>> {
        // (cos t, sin t, t)
        let (s, c) = t.sin_cos();
        vec![
            Vector3::new(c, s, t),
            Vector3::new(-s, c, 1.0),
            Vector3::new(-c, -s, 0.0),
            Vector3::new(s, -c, 0.0),
            Vector3::new(c, s, 0.0),
        ]
    }

    #[test]
    fn helix_constants() {
        for i in 0..10 {
            let p = frenet_from_jet(0.3 * i as f64, &helix_jet(0.3 * i as f64));
            assert!((p.k - 0.5).abs() < 1e-14 && (p.tau - 0.5).abs() < 1e-14);
            assert!(p.dk.abs() < 1e-14 && p.ddk.abs() < 1e-14 && p.dtau.abs() < 1e-14);
        }
    }

    #[test]
    fn circle_has_constant_curvature_and_is_degenerate() {
        let c =
            PeriodicCurve::from_fn(64, TAU, |t| vec![2.0 * t.cos(), 2.0 * t.sin(), 0.0]).unwrap();
        let f = frenet_apparatus(&c).unwrap();
        for p in &f.points {
            assert!((p.k - 0.5).abs() < 1e-12 && p.dk.abs() < 1e-10);
        }
        assert!((f.total_length - 2.0 * TAU).abs() < 1e-12);
        let v = detect_vertices(&f, 1e-6);
        assert!(v.degenerate && v.vertices.len() == 64 && !v.vertex_free);
        assert!(matches!(
            osculating_sphere(&c, 0.3, 1e-6),
            Err(GeomError::Vertex { .. })
        ));
    }

    #[test]
    fn ellipse_has_four_vertices() {
        let c = PeriodicCurve::from_fn(128, TAU, |t| vec![2.0 * t.cos(), t.sin(), 0.0]).unwrap();
        let f = frenet_apparatus(&c).unwrap();
        assert!(f.points.iter().all(|p| p.tau.abs() < 1e-9));
        let v = detect_vertices(&f, 1e-6);
        assert_eq!(v.vertices.len(), 4, "{:?}", v.vertices);
        for t in &v.vertices {
            let q = t / (TAU / 4.0);
            assert!((q - q.round()).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn reparametrized_circle() {
        let c =
            PeriodicCurve::from_fn(64, TAU, |t| vec![2.0 * t.cos(), 2.0 * t.sin(), 0.0]).unwrap();
        let r = arclength_reparametrize(&c).unwrap();
        assert!((r.period() - 2.0 * TAU).abs() < 1e-12);
    }

    #[test]
    fn inflection_rejected() {
        // figure-eight in a plane has inflections
        let c = PeriodicCurve::from_fn(64, TAU, |t| vec![t.sin(), (2.0 * t).sin(), 0.0]).unwrap();
        assert!(matches!(
            frenet_apparatus(&c),
            Err(GeomError::Inflection { .. })
        ));
    }
}
