//! Quadrature rules: Gauss–Legendre nodes, composite panels, periodic
//! trapezoid and an adaptive Gauss–Kronrod integrator.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::specfun::Tolerance;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_and_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (z * p - p0) / (z * z - 1.0);
    (p, d)
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `order` nodes on `[a, b]`.
#[derive(Debug, Clone)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + h * p as f64;
            for (x, w) in gx.iter().zip(&gw) {
                nodes.push(lo + 0.5 * h * (x + 1.0));
                weights.push(0.5 * h * w);
            }
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Trapezoid rule on a full period `[-pi, pi)` for periodic complex integrands.
pub fn periodic_trapezoid(n: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += f(-PI + h * k as f64);
    }
    acc * h
}

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
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(PartialEq)]
struct Interval {
    err: f64,
    a: f64,
    b: f64,
    val: f64,
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of `f` over `[a, b]`.
///
/// Returns `(value, error_estimate)`. The interval with the largest error is
/// bisected until the summed estimate meets `tol` or `tol.max_terms`
/// intervals have been used.
pub fn adaptive_gk15(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: &Tolerance) -> (f64, f64) {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&f, a, b);
    heap.push(Interval {
        err: e,
        a,
        b,
        val: v,
    });
    let mut total = v;
    let mut err = e;
    while err > tol.abs_tol.max(tol.rel_tol * total.abs()) && heap.len() < tol.max_terms {
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.val;
        err += e1 + e2 - worst.err;
        heap.push(Interval {
            err: e1,
            a: worst.a,
            b: mid,
            val: v1,
        });
        heap.push(Interval {
            err: e2,
            a: mid,
            b: worst.b,
            val: v2,
        });
    }
    // Re-sum to shed the drift of the running updates.
    let total: f64 = heap.iter().map(|i| i.val).sum();
    let err: f64 = heap.iter().map(|i| i.err).sum();
    (total, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        // Exact for degree <= 19.
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn large_gauss_legendre_rule_is_sane() {
        let (x, w) = gauss_legendre(200);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (3.0 * x).cos()).sum();
        assert!((s - 2.0 * 3.0f64.sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn panels_cover_interval() {
        let r = PanelRule::new(0.0, 3.0, 4, 8);
        assert_eq!(r.len(), 32);
        assert!((r.integrate(|x| x.exp()) - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_exact_for_trig_polynomials() {
        let v = periodic_trapezoid(16, |t| {
            Complex64::new(0.0, 3.0 * t).exp() * Complex64::new(0.0, -3.0 * t).exp()
        });
        assert!((v.re - 2.0 * PI).abs() < 1e-13 && v.im.abs() < 1e-13);
        let z = periodic_trapezoid(16, |t| Complex64::new(0.0, 5.0 * t).exp());
        assert!(z.norm() < 1e-13);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let tol = Tolerance::new(1e-13, 1e-14, 2000).unwrap();
        let (v, e) = adaptive_gk15(|x| (20.0 * x).sin() * x, 0.0, 10.0, &tol);
        let exact = ((200.0f64).sin() - 200.0 * (200.0f64).cos()) / 400.0;
        assert!((v - exact).abs() < 1e-12, "{v} vs {exact}, est {e}");
    }
}
