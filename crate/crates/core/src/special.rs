//! Chebyshev polynomials, normalized associated Legendre functions, and the
//! spectral constants of the reference disk operators.

use alloc::vec;
use alloc::vec::Vec;

/// `T_k(x)` for `|x| ≤ 1`.
pub fn cheb_t(k: usize, x: f64) -> f64 {
    (k as f64 * x.clamp(-1.0, 1.0).acos()).cos()
}

/// `U_k(x)` for `|x| < 1`.
pub fn cheb_u(k: usize, x: f64) -> f64 {
    let t = x.clamp(-1.0, 1.0).acos();
    let s = t.sin();
    if s.abs() < 1e-14 {
        let sign = if x > 0.0 || k % 2 == 0 { 1.0 } else { -1.0 };
        return sign * (k + 1) as f64;
    }
    ((k + 1) as f64 * t).sin() / s
}

/// Associated Legendre functions `P_n^m(t)` for `n = m..=n_max`, scaled so
/// that `∫_0^1 P_n^m(t)² dt = 1`.
///
/// Entry `i` of the result is degree `m + i`. Condon–Shortley phase is
/// omitted.
pub fn assoc_legendre_unit(m: usize, n_max: usize, t: f64) -> Vec<f64> {
    if n_max < m {
        return Vec::new();
    }
    let s = (1.0 - t * t).max(0.0).sqrt();
    // orthonormal on [-1, 1], then times √2 for [0, 1]
    let mut pmm = (0.5f64).sqrt();
    for k in 1..=m {
        let k = k as f64;
        pmm *= ((2.0 * k + 1.0) / (2.0 * k)).sqrt() * s;
    }
    let mut out = vec![0.0; n_max - m + 1];
    out[0] = pmm;
    if n_max > m {
        out[1] = ((2 * m + 3) as f64).sqrt() * t * pmm;
    }
    let mf = m as f64;
    for n in m + 2..=n_max {
        let nf = n as f64;
        let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
        let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
        out[n - m] = a * (t * out[n - m - 1] - b * out[n - m - 2]);
    }
    out.iter_mut().for_each(|v| *v *= core::f64::consts::SQRT_2);
    out
}

fn gamma_ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
    (libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(c) - libm::lgamma(d)).exp()
}

/// Eigenvalue of the disk single-layer operator `(1/4π)∫ φ/|x-y|` on
/// `P_n^m(t) e^{imθ}/t`, `t = √(1-|x|²)`, for `n - m` even.
pub fn disk_single_layer_eigenvalue(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    0.25 * gamma_ratio(
        0.5 * (n + m + 1.0),
        0.5 * (n - m + 1.0),
        0.5 * (n + m + 2.0),
        0.5 * (n - m + 2.0),
    )
}

/// Eigenvalue of the disk hypersingular operator `(1/4π) f.p.∫ φ/|x-y|³` on
/// `P_n^m(t) e^{imθ}`, mapping it to the same function divided by `t`, for
/// `n - m` odd.
pub fn disk_hypersingular_eigenvalue(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    -gamma_ratio(
        0.5 * (n + m + 2.0),
        0.5 * (n - m + 2.0),
        0.5 * (n + m + 1.0),
        0.5 * (n - m + 1.0),
    )
}
