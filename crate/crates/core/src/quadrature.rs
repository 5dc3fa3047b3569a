//! Adaptive Gauss–Kronrod quadrature and scalar root/minimum refinement.

use std::collections::BinaryHeap;

// 15-point Kronrod nodes on [-1,1] (non-negative half) and weights;
// every other node carries the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// One G7/K15 panel: (kronrod value, |kronrod - gauss|).
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7/K15 integration of `f` over `[a, b]`.
///
/// The interval is first split into `initial_panels` pieces; the panel with
/// the largest error estimate is bisected until the summed estimate drops
/// below `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    initial_panels: usize,
    max_panels: usize,
) -> Quadrature {
    let n0 = initial_panels.max(1);
    let mut heap = BinaryHeap::with_capacity(max_panels + n0);
    let mut total = 0.0;
    let mut err = 0.0;
    let width = (b - a) / n0 as f64;
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { lo + width };
        let (v, e) = gauss_kronrod_15(&f, lo, hi);
        total += v;
        err += e;
        heap.push(Panel {
            a: lo,
            b: hi,
            value: v,
            error: e,
        });
    }
    let mut evaluations = 15 * n0;
    let mut converged = err <= abs_tol.max(rel_tol * total.abs());
    while !converged && heap.len() < max_panels {
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gauss_kronrod_15(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.b);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        converged = err <= abs_tol.max(rel_tol * total.abs());
    }
    // re-sum to shed the drift of the running updates
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum();
    Quadrature {
        value,
        error_estimate,
        evaluations,
        converged,
    }
}

/// Trapezoid rule on uniform samples of a periodic integrand over one period.
pub fn periodic_trapezoid(samples: &[f64], period: f64) -> f64 {
    samples.iter().sum::<f64>() * period / samples.len() as f64
}

/// Brent's method for a root of `f` bracketed by `[a, b]`.
///
/// Returns `None` when `f(a)` and `f(b)` have the same strict sign.
pub fn brent_root<F: Fn(f64) -> f64>(
    f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Option<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() <= xtol {
            return Some(b);
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > lo.min(b)) && (s < lo.max(b)));
        let slow = if bisected {
            (s - b).abs() >= (b - c).abs() / 2.0 || (b - c).abs() < xtol
        } else {
            (s - b).abs() >= (c - d).abs() / 2.0 || (c - d).abs() < xtol
        };
        if out_of_range || slow {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Some(b)
}

/// Golden-section search for a local minimum of `f` on `[a, b]`.
pub fn golden_minimum<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomials_exactly() {
        let q = integrate(|x| x.powi(6) - 2.0 * x, 0.0, 2.0, 1e-12, 0.0, 1, 100);
        assert!((q.value - (128.0 / 7.0 - 4.0)).abs() < 1e-12);
        assert!(q.converged);
    }

    #[test]
    fn integrates_peaked_function() {
        // ∫ 1/(1e-4 + x²) on [-1,1] = 2·100·atan(100)
        let q = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 0.0, 4, 2000);
        let exact = 200.0 * 100f64.atan();
        assert!(
            (q.value - exact).abs() < 1e-9 * exact,
            "{} vs {}",
            q.value,
            exact
        );
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let n = 32;
        let s: Vec<f64> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                (t.cos()).exp()
            })
            .collect();
        // ∫ e^{cos t} dt = 2π I₀(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        assert!((periodic_trapezoid(&s, 2.0 * PI) - exact).abs() < 1e-13);
    }

    #[test]
    fn brent_finds_roots() {
        let r = brent_root(|x| x.cos() - x, 0.0, 1.0, 1e-15, 100).unwrap();
        assert!((r - 0.739_085_133_215_160_6).abs() < 1e-14);
        assert!(brent_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 50).is_none());
    }

    #[test]
    fn golden_finds_minimum() {
        let (x, fx) = golden_minimum(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        // a quadratic pins its minimizer only to about sqrt(eps)
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }
}
