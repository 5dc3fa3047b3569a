use std::f64::consts::TAU;

use nalgebra::Vector3;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lorentz::LorentzVector;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 16;

/// Closed curve in ℝᵈ given by the trigonometric interpolant of `N` uniform
/// samples over one period.
///
/// Per component the interpolant is
/// `a₀ + Σ_{k<N/2} (a_k cos kωt + b_k sin kωt) + a_{N/2} cos(N/2·ωt)`
/// with `ω = 2π/L`. Derivatives of every order are exact derivatives of
/// this trigonometric polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCurve {
    dim: usize,
    period: f64,
    samples: Vec<Vec<f64>>,
    cos: Vec<Vec<f64>>,
    sin: Vec<Vec<f64>>,
}

/// Serialized curve: `{dimension, period, samples}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveData {
    pub dimension: usize,
    pub period: f64,
    pub samples: Vec<Vec<f64>>,
}

impl PeriodicCurve {
    /// Builds the interpolant of `samples[j] = x(j·L/N)`.
    pub fn from_samples(samples: Vec<Vec<f64>>, period: f64) -> Result<Self> {
        let n = samples.len();
        if n < MIN_SAMPLES || n % 2 != 0 {
            return Err(GeomError::TooFewSamples {
                min: MIN_SAMPLES,
                got: n,
            });
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(GeomError::Precondition(format!(
                "period must be positive, got {period}"
            )));
        }
        let dim = samples[0].len();
        if dim == 0 {
            return Err(GeomError::Dimension {
                expected: 1,
                got: 0,
            });
        }
        for row in &samples {
            if row.len() != dim {
                return Err(GeomError::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(GeomError::NonFinite);
            }
        }
        let fft = FftPlanner::new().plan_fft_forward(n);
        let half = n / 2;
        let mut cos = Vec::with_capacity(dim);
        let mut sin = Vec::with_capacity(dim);
        for c in 0..dim {
            let mut buf: Vec<Complex<f64>> =
                samples.iter().map(|r| Complex::new(r[c], 0.0)).collect();
            fft.process(&mut buf);
            let nf = n as f64;
            let mut a = vec![0.0; half + 1];
            let mut b = vec![0.0; half + 1];
            a[0] = buf[0].re / nf;
            for k in 1..half {
                a[k] = 2.0 * buf[k].re / nf;
                b[k] = -2.0 * buf[k].im / nf;
            }
            a[half] = buf[half].re / nf;
            cos.push(a);
            sin.push(b);
        }
        Ok(Self {
            dim,
            period,
            samples,
            cos,
            sin,
        })
    }

    /// Samples `f` at `n` uniform parameters of `[0, period)`.
    pub fn from_fn<F: Fn(f64) -> Vec<f64>>(n: usize, period: f64, f: F) -> Result<Self> {
        let rows = (0..n).map(|j| f(period * j as f64 / n as f64)).collect();
        Self::from_samples(rows, period)
    }

    pub fn from_data(data: CurveData) -> Result<Self> {
        if let Some(row) = data.samples.iter().find(|r| r.len() != data.dimension) {
            return Err(GeomError::Dimension {
                expected: data.dimension,
                got: row.len(),
            });
        }
        Self::from_samples(data.samples, data.period)
    }

    pub fn to_data(&self) -> CurveData {
        CurveData {
            dimension: self.dim,
            period: self.period,
            samples: self.samples.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Number of samples `N`.
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Parameter of sample `j`.
    pub fn param(&self, j: usize) -> f64 {
        self.period * j as f64 / self.len() as f64
    }

    pub fn params(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.param(j)).collect()
    }

    /// Angular frequency `2π/L`.
    pub fn omega(&self) -> f64 {
        TAU / self.period
    }

    /// Derivatives of orders `0..=max_order` at `t`, one row per order.
    pub fn jet(&self, t: f64, max_order: usize) -> Vec<Vec<f64>> {
        let half = self.len() / 2;
        let w = self.omega();
        let mut out = vec![vec![0.0; self.dim]; max_order + 1];
        for (c, row0) in self.cos.iter().enumerate() {
            out[0][c] = row0[0];
        }
        let theta = w * t;
        let (s1, c1) = theta.sin_cos();
        let (mut sk, mut ck) = (0.0, 1.0);
        for k in 1..=half {
            if k % 32 == 0 {
                (sk, ck) = (k as f64 * theta).sin_cos();
            } else {
                (sk, ck) = (sk * c1 + ck * s1, ck * c1 - sk * s1);
            }
            let kw = k as f64 * w;
            let mut scale = 1.0;
            for (m, row) in out.iter_mut().enumerate() {
                // d^m/dt^m of (cos, sin) rotates the phase by mπ/2
                let (dc, ds) = match m % 4 {
                    0 => (ck, sk),
                    1 => (-sk, ck),
                    2 => (-ck, -sk),
                    _ => (sk, -ck),
                };
                for c in 0..self.dim {
                    let a = self.cos[c][k];
                    let b = if k < half { self.sin[c][k] } else { 0.0 };
                    row[c] += scale * (a * dc + b * ds);
                }
                scale *= kw;
            }
        }
        out
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.jet(t, 0).swap_remove(0)
    }

    pub fn derivative(&self, t: f64, order: usize) -> Vec<f64> {
        self.jet(t, order).swap_remove(order)
    }

    /// `∫₀ᵗ x_c` for component `c`, termwise on the trigonometric series.
    pub fn integral(&self, t: f64, c: usize) -> f64 {
        let half = self.len() / 2;
        let w = self.omega();
        let mut acc = self.cos[c][0] * t;
        for k in 1..=half {
            let kw = k as f64 * w;
            let (s, co) = (kw * t).sin_cos();
            let b = if k < half { self.sin[c][k] } else { 0.0 };
            acc += (self.cos[c][k] * s + b * (1.0 - co)) / kw;
        }
        acc
    }

    /// Largest coefficient magnitude in the upper quarter of the spectrum,
    /// relative to the largest overall: a resolution indicator.
    pub fn spectral_tail(&self) -> f64 {
        let half = self.len() / 2;
        let mut top = 0.0_f64;
        let mut tail = 0.0_f64;
        for c in 0..self.dim {
            for k in 1..=half {
                let m = self.cos[c][k].hypot(self.sin[c][k]);
                top = top.max(m);
                if 4 * k > 3 * half {
                    tail = tail.max(m);
                }
            }
        }
        if top > 0.0 {
            tail / top
        } else {
            0.0
        }
    }

    /// Same curve with reversed orientation, `t ↦ −t`, on the same grid.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let rows = (0..n).map(|j| self.samples[(n - j) % n].clone()).collect();
        Self::from_samples(rows, self.period).expect("valid source")
    }

    /// Applies `f` to every sample.
    pub fn map_samples<F: Fn(&[f64]) -> Vec<f64>>(&self, f: F) -> Result<Self> {
        Self::from_samples(self.samples.iter().map(|r| f(r)).collect(), self.period)
    }

    /// Re-interpolates on `n` uniform samples.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        Self::from_fn(n, self.period, |t| self.eval(t))
    }

    pub fn point3(&self, t: f64) -> Result<Vector3<f64>> {
        self.check_dim(3)?;
        let p = self.eval(t);
        Ok(Vector3::new(p[0], p[1], p[2]))
    }

    /// Jet of a space curve as nalgebra vectors.
    pub fn jet3(&self, t: f64, max_order: usize) -> Result<Vec<Vector3<f64>>> {
        self.check_dim(3)?;
        Ok(self
            .jet(t, max_order)
            .into_iter()
            .map(|r| Vector3::new(r[0], r[1], r[2]))
            .collect())
    }

    /// Jet of a path in ℝ⁵.
    pub fn jet5(&self, t: f64, max_order: usize) -> Result<Vec<LorentzVector>> {
        self.check_dim(5)?;
        self.jet(t, max_order)
            .into_iter()
            .map(|r| LorentzVector::from_slice(&r))
            .collect()
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim != d {
            return Err(GeomError::Dimension {
                expected: d,
                got: self.dim,
            });
        }
        Ok(())
    }
}

/// Interpolant of `points` (rows of equal length) over `[0, period)`.
pub fn curve_from_samples(points: Vec<Vec<f64>>, period: f64) -> Result<PeriodicCurve> {
    PeriodicCurve::from_samples(points, period)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64, n: usize) -> PeriodicCurve {
        PeriodicCurve::from_fn(n, TAU, |t| vec![r * t.cos(), r * t.sin(), 0.0]).unwrap()
    }

    #[test]
    fn reproduces_samples_and_circle() {
        let c = circle(2.0, 64);
        for j in 0..64 {
            let p = c.eval(c.param(j));
            for i in 0..3 {
                assert!((p[i] - c.samples()[j][i]).abs() < 1e-13);
            }
        }
        for i in 0..200 {
            let t = 0.0317 * i as f64;
            let p = c.eval(t);
            assert!((p[0] - 2.0 * t.cos()).abs() < 1e-10 && (p[1] - 2.0 * t.sin()).abs() < 1e-10);
            let q = c.eval(t + TAU);
            assert!((p[0] - q[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_has_zero_derivative() {
        let c = PeriodicCurve::from_samples(vec![vec![1.5, -2.0]; 32], 3.0).unwrap();
        let j = c.jet(0.77, 4);
        for row in &j[1..] {
            assert!(row.iter().all(|x| x.abs() < 1e-10));
        }
    }

    #[test]
    fn band_limited_input_is_resolution_independent() {
        let a = PeriodicCurve::from_fn(16, TAU, |t| vec![t.cos()]).unwrap();
        let b = PeriodicCurve::from_fn(64, TAU, |t| vec![t.cos()]).unwrap();
        for i in 0..50 {
            let t = 0.123 * i as f64;
            assert!((a.eval(t)[0] - b.eval(t)[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_derivatives_of_sines() {
        let n = 64;
        for k in 1..=n / 4 {
            let c = PeriodicCurve::from_fn(n, TAU, |t| vec![(k as f64 * t).sin()]).unwrap();
            for i in 0..20 {
                let t = 0.29 * i as f64;
                let d = c.derivative(t, 1)[0];
                assert!((d - k as f64 * (k as f64 * t).cos()).abs() < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn nyquist_mode_and_integral() {
        let n = 16;
        let c = PeriodicCurve::from_fn(n, TAU, |t| vec![(8.0 * t).cos() + 1.0 + (3.0 * t).sin()])
            .unwrap();
        assert!((c.eval(0.0)[0] - 2.0).abs() < 1e-13);
        let t: f64 = 1.3;
        let exact = t + (1.0 - (3.0 * t).cos()) / 3.0 + (8.0 * t).sin() / 8.0;
        assert!((c.integral(t, 0) - exact).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_sample_counts() {
        assert!(matches!(
            PeriodicCurve::from_samples(vec![vec![0.0]; 15], 1.0),
            Err(GeomError::TooFewSamples { .. })
        ));
        assert!(PeriodicCurve::from_samples(vec![vec![0.0]; 18], 1.0).is_ok());
        assert!(PeriodicCurve::from_samples(vec![vec![0.0]; 17], 1.0).is_err());
    }

    #[test]
    fn reversal_and_data_round_trip() {
        let c = PeriodicCurve::from_fn(32, TAU, |t| vec![t.cos(), (2.0 * t).sin(), 0.1]).unwrap();
        let r = c.reversed();
        for i in 0..10 {
            let t = 0.4 * i as f64;
            let (a, b) = (c.eval(-t), r.eval(t));
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        }
        let back = PeriodicCurve::from_data(c.to_data()).unwrap();
        assert_eq!(back, c);
    }
}
