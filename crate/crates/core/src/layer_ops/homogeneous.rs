//! The remainder kernels `K_ε(x, z)` of the `T_ε` decomposition and a
//! finite-difference check of the homogeneous-kernel identities.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::FlatteningMap;
use crate::linalg::{sym_sqrt_inv, DenseMatrix};

/// `K_ε(x, z) = (1/πγ(0)) log|z| - (1/π√det A(εx)) log|√γ(0) M(εx) z|`.
pub fn k_eps_2d(flat: &FlatteningMap, eps: f64) -> impl Fn(&[f64], &[f64]) -> f64 + '_ {
    let g0 = flat.gamma_at([0.0, 0.0]);
    move |x: &[f64], z: &[f64]| {
        let a = flat.a_field([eps * x[0], eps * x[1]]);
        let am = DenseMatrix::from_fn(2, 2, |i, j| a[i][j]);
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let m = sym_sqrt_inv(&am).expect("A(εx) is SPD");
        let mz = m.matvec(z);
        let r = (z[0] * z[0] + z[1] * z[1]).sqrt();
        let rm = g0.sqrt() * (mz[0] * mz[0] + mz[1] * mz[1]).sqrt();
        r.ln() / (PI * g0) - rm.ln() / (PI * det.sqrt())
    }
}

/// `K_ε(x, z) = 1/(2πε√det A(εx)|M(εx)z|) - 1/(2πεγ(0)|z|)` for a 3×3
/// coefficient field `a`.
pub fn k_eps_3d<F>(a: F, gamma0: f64, eps: f64) -> impl Fn(&[f64], &[f64]) -> f64
where
    F: Fn(&[f64]) -> DenseMatrix,
{
    move |x: &[f64], z: &[f64]| {
        let ex: Vec<f64> = x.iter().map(|v| eps * v).collect();
        let am = a(&ex);
        let m = sym_sqrt_inv(&am).expect("A(εx) is SPD");
        let det_a = am[(0, 0)] * (am[(1, 1)] * am[(2, 2)] - am[(1, 2)] * am[(2, 1)])
            - am[(0, 1)] * (am[(1, 0)] * am[(2, 2)] - am[(1, 2)] * am[(2, 0)])
            + am[(0, 2)] * (am[(1, 0)] * am[(2, 1)] - am[(1, 1)] * am[(2, 0)]);
        let det_m = 1.0 / det_a.sqrt();
        let mz = m.matvec(z);
        let rm = mz.iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        det_m / (2.0 * PI * eps * rm) - 1.0 / (2.0 * PI * eps * gamma0 * r)
    }
}

/// `∂_{z_i}^m K(x, z)` by nested central differences with step `h`.
fn dz(kernel: &dyn Fn(&[f64], &[f64]) -> f64, x: &[f64], z: &[f64], i: usize, m: usize, h: f64) -> f64 {
    if m == 0 {
        return kernel(x, z);
    }
    let mut zp = z.to_vec();
    let mut zm = z.to_vec();
    zp[i] += h;
    zm[i] -= h;
    (dz(kernel, x, &zp, i, m - 1, h) - dz(kernel, x, &zm, i, m - 1, h)) / (2.0 * h)
}

/// Relative defects `(parity, homogeneity)` of the pure `m`-th
/// `z`-derivatives against oddness and homogeneity of degree `-(d-1)`,
/// maximized over the coordinate directions. `d = z.len()`.
pub fn class_defects(kernel: &dyn Fn(&[f64], &[f64]) -> f64, m: usize, x: &[f64], z: &[f64], t: f64) -> (f64, f64) {
    let d = z.len();
    let r = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let neg: Vec<f64> = z.iter().map(|v| -v).collect();
    let scaled: Vec<f64> = z.iter().map(|v| t * v).collect();
    let mut parity = 0.0f64;
    let mut homog = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..d {
        let h = 1e-3 * r;
        let a = dz(kernel, x, z, i, m, h);
        let b = dz(kernel, x, &neg, i, m, h);
        let c = dz(kernel, x, &scaled, i, m, t * h);
        parity = parity.max((a + b).abs());
        homog = homog.max((c - t.powi(-(d as i32 - 1)) * a).abs());
        scale = scale.max(a.abs());
    }
    let s = scale.max(f64::MIN_POSITIVE);
    (parity / s, homog / s)
}
