//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi, Chebyshev, adaptive
//! Gauss–Kronrod, and a degree-5 triangle rule.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::tridiag_eigen;
use crate::{Error, Result};

/// Nodes and weights of a one-dimensional rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Maps the rule from `[-1, 1]` to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| c + h * x).collect(),
            weights: self.weights.iter().map(|w| h * w).collect(),
        }
    }
}

/// Gauss–Legendre rule on `[-1, 1]`, ascending nodes.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Jacobi rule for the weight `(1-x)^a (1+x)^b` on `[-1, 1]`
/// (Golub–Welsch).
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule> {
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::InvalidInput("Jacobi exponents must exceed -1".into()));
    }
    let s = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let kf = k as f64;
        let den = (2.0 * kf + s) * (2.0 * kf + s + 2.0);
        diag.push(if den.abs() < 1e-300 { (b - a) / (s + 2.0) } else { (b * b - a * a) / den });
        if k + 1 < n {
            let k1 = kf + 1.0;
            let t = 2.0 * k1 + s;
            let ratio = if k + 1 == 1 && (s + 1.0).abs() < 1e-14 { 1.0 } else { (k1 + s) / (t - 1.0) };
            let beta = 4.0 * k1 * (k1 + a) * (k1 + b) / (t * t * (t + 1.0)) * ratio;
            off.push(beta.sqrt());
        }
    }
    let mu0 = (s + 1.0) * core::f64::consts::LN_2 + libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0)
        - libm::lgamma(s + 2.0);
    let mu0 = mu0.exp();
    let (nodes, z) = tridiag_eigen(&diag, &off)?;
    let weights = z.iter().map(|v| mu0 * v * v).collect();
    Ok(Rule { nodes, weights })
}

/// Gauss–Chebyshev rule of the first kind: `∫ f(x)/√(1-x²) dx`.
/// Nodes `cos((2i-1)π/(2n))`, descending.
pub fn chebyshev_first(n: usize) -> Rule {
    let nodes = (1..=n).map(|i| (PI * (2 * i - 1) as f64 / (2 * n) as f64).cos()).collect();
    Rule { nodes, weights: alloc::vec![PI / n as f64; n] }
}

/// Gauss–Chebyshev rule of the second kind: `∫ f(x)√(1-x²) dx`.
/// Nodes `cos(iπ/(n+1))`, descending.
pub fn chebyshev_second(n: usize) -> Rule {
    let h = PI / (n + 1) as f64;
    let nodes = (1..=n).map(|i| (h * i as f64).cos()).collect();
    let weights = (1..=n).map(|i| h * (h * i as f64).sin().powi(2)).collect();
    Rule { nodes, weights }
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: (Kronrod estimate, error estimate).
pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WK[7] * fc;
    let mut g = GK_WG[3] * fc;
    for i in 0..7 {
        let dx = h * GK_X[i];
        let s = f(c - dx) + f(c + dx);
        k += GK_WK[i] * s;
        if i % 2 == 1 {
            g += GK_WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection with Gauss–Kronrod panels.
///
/// `tol` is an absolute tolerance per unit length of the original interval.
/// Fails with [`Error::QuadratureFailure`] when a panel still misses its
/// share of the tolerance at depth `max_depth`.
pub fn integrate_adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let density = tol / (b - a).abs();
    fn rec(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        est: (f64, f64),
        density: f64,
        depth: usize,
        max_depth: usize,
    ) -> Result<f64> {
        let allowed = (density * (b - a).abs()).max(1e-15 * est.0.abs());
        if est.1 <= allowed {
            return Ok(est.0);
        }
        if depth >= max_depth {
            return Err(Error::QuadratureFailure { depth: max_depth });
        }
        let m = 0.5 * (a + b);
        let l = gk15(f, a, m);
        let r = gk15(f, m, b);
        Ok(rec(f, a, m, l, density, depth + 1, max_depth)? + rec(f, m, b, r, density, depth + 1, max_depth)?)
    }
    rec(f, a, b, gk15(f, a, b), density, 0, max_depth)
}

/// Degree-5 seven-point rule on a triangle: barycentric coordinates and
/// weights summing to one.
pub const TRI7: [([f64; 3], f64); 7] = {
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_3;
    const W0: f64 = 0.225;
    const W1: f64 = 0.132_394_152_788_506_2;
    const W2: f64 = 0.125_939_180_544_827_2;
    [
        ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], W0),
        ([A1, B1, B1], W1),
        ([B1, A1, B1], W1),
        ([B1, B1, A1], W1),
        ([A2, B2, B2], W2),
        ([B2, A2, B2], W2),
        ([B2, B2, A2], W2),
    ]
};
