//! Disk operators on a polar tensor grid.
//!
//! With `t = √(1-ρ²)`, the area element is `t dt dθ`. Both operators are
//! diagonal on `P_n^m(t) e^{imθ}`:
//!
//! - `S₁[P_n^m e^{imθ}/t] = λ_{nm} P_n^m e^{imθ}` for `n - m` even,
//! - `R₁[P_n^m e^{imθ}] = μ_{nm} P_n^m e^{imθ}/t` for `n - m` odd.
//!
//! In the regular-part coordinates `ψ` (`φ = ψ/t` for `S₁`, `φ = tψ` for
//! `R₁`) both become `q ↦ κ q` on radial functions `q = P_n^m` resp.
//! `P_n^m/t`, orthonormal for the radial weights `w` resp. `w t²`. The radial
//! rule is the positive half of a `2n_r`-point Gauss–Legendre rule, which
//! makes the truncated basis (`n ≤ 2n_r - 1`) exactly orthonormal.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use super::{KernelMatrix, OperatorTag, WeightClass};
use crate::linalg::DenseMatrix;
use crate::quadrature::gauss_legendre;
use crate::special::{assoc_legendre_unit, disk_hypersingular_eigenvalue, disk_single_layer_eigenvalue};
use crate::{Point, Result};

/// Radial nodes `t`, radial weights on `[0, 1]`, angles, and the node
/// positions (radial-major order).
pub fn disk_grid(n_r: usize, n_theta: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<Point>) {
    let gl = gauss_legendre(2 * n_r);
    let t: Vec<f64> = gl.nodes[n_r..].to_vec();
    let wt: Vec<f64> = gl.weights[n_r..].to_vec();
    let theta: Vec<f64> = (0..n_theta).map(|k| TAU * k as f64 / n_theta as f64).collect();
    let mut pts = Vec::with_capacity(n_r * n_theta);
    for &tr in &t {
        let rho = (1.0 - tr * tr).sqrt();
        for &th in &theta {
            pts.push([rho * th.cos(), rho * th.sin()]);
        }
    }
    (t, wt, theta, pts)
}

#[derive(Debug, Clone)]
struct Mode {
    m: usize,
    /// `n_r × count` radial functions at the nodes.
    radial: DenseMatrix,
    eig: Vec<f64>,
}

/// Spectral description of a disk operator.
#[derive(Debug, Clone)]
pub struct DiskBasis {
    pub n_r: usize,
    pub n_theta: usize,
    /// Radial quadrature weight including the class factor.
    omega: Vec<f64>,
    theta: Vec<f64>,
    modes: Vec<Mode>,
}

fn angular(m: usize, sine: bool, th: f64) -> f64 {
    if m == 0 {
        1.0 / TAU.sqrt()
    } else if sine {
        (m as f64 * th).sin() / PI.sqrt()
    } else {
        (m as f64 * th).cos() / PI.sqrt()
    }
}

impl DiskBasis {
    fn new(n_r: usize, n_theta: usize, hyper: bool) -> Self {
        let (t, wt, theta, _) = disk_grid(n_r, n_theta);
        let n_max = 2 * n_r - 1;
        let omega: Vec<f64> = t.iter().zip(&wt).map(|(t, w)| if hyper { w * t * t } else { *w }).collect();
        let mut modes = Vec::new();
        for m in 0..n_theta / 2 {
            let first = if hyper { m + 1 } else { m };
            let degrees: Vec<usize> = (first..=n_max).step_by(2).collect();
            if degrees.is_empty() {
                continue;
            }
            let mut radial = DenseMatrix::zeros(n_r, degrees.len());
            for (r, &tr) in t.iter().enumerate() {
                let p = assoc_legendre_unit(m, n_max, tr);
                for (b, &n) in degrees.iter().enumerate() {
                    radial[(r, b)] = if hyper { p[n - m] / tr } else { p[n - m] };
                }
            }
            let eig = degrees
                .iter()
                .map(|&n| if hyper { disk_hypersingular_eigenvalue(n, m) } else { disk_single_layer_eigenvalue(n, m) })
                .collect();
            modes.push(Mode { m, radial, eig });
        }
        Self { n_r, n_theta, omega, theta, modes }
    }

    /// Ratio of the extreme eigenvalue magnitudes on the resolved range.
    pub fn condition(&self) -> f64 {
        let mags = self.modes.iter().flat_map(|m| m.eig.iter().map(|e| e.abs()));
        let (lo, hi) = mags.fold((f64::INFINITY, 0.0f64), |(a, b), e| (a.min(e), b.max(e)));
        hi / lo
    }

    pub fn dimension(&self) -> usize {
        self.modes.iter().map(|m| if m.m == 0 { 1 } else { 2 } * m.eig.len()).sum()
    }

    /// Applies `q ↦ f(κ) q` after projecting `values` on the basis.
    fn spectral_map(&self, values: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
        let (n_r, n_t) = (self.n_r, self.n_theta);
        let dth = TAU / n_t as f64;
        let mut out = vec![0.0; n_r * n_t];
        for mode in &self.modes {
            for sine in [false, true] {
                if sine && mode.m == 0 {
                    continue;
                }
                let ang: Vec<f64> = self.theta.iter().map(|&th| angular(mode.m, sine, th)).collect();
                // angular projection per radius
                let a: Vec<f64> = (0..n_r)
                    .map(|r| (0..n_t).map(|k| values[r * n_t + k] * ang[k]).sum::<f64>() * dth)
                    .collect();
                let nb = mode.eig.len();
                let mut coef = vec![0.0; nb];
                for (b, c) in coef.iter_mut().enumerate() {
                    let proj: f64 = (0..n_r).map(|r| self.omega[r] * mode.radial[(r, b)] * a[r]).sum();
                    *c = f(mode.eig[b]) * proj;
                }
                for r in 0..n_r {
                    let s: f64 = (0..nb).map(|b| mode.radial[(r, b)] * coef[b]).sum();
                    for k in 0..n_t {
                        out[r * n_t + k] += s * ang[k];
                    }
                }
            }
        }
        out
    }

    /// Operator applied to nodal `ψ`.
    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        self.spectral_map(psi, |k| k)
    }

    /// Inverse on the resolved range.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.spectral_map(rhs, |k| 1.0 / k)
    }

    /// Orthogonal projection onto the resolved range.
    pub fn project(&self, values: &[f64]) -> Vec<f64> {
        self.spectral_map(values, |_| 1.0)
    }

    fn dense(&self) -> DenseMatrix {
        let (n_r, n_t) = (self.n_r, self.n_theta);
        let dth = TAU / n_t as f64;
        // kernel depends on the angle only through k - k'
        let mut table = vec![0.0; n_r * n_r * n_t];
        for mode in &self.modes {
            let c = if mode.m == 0 { 1.0 / TAU } else { 1.0 / PI };
            let cosines: Vec<f64> = (0..n_t).map(|dk| (mode.m as f64 * dth * dk as f64).cos()).collect();
            for r in 0..n_r {
                for s in 0..n_r {
                    let k: f64 = (0..mode.eig.len()).map(|b| mode.eig[b] * mode.radial[(r, b)] * mode.radial[(s, b)]).sum();
                    let base = (r * n_r + s) * n_t;
                    for dk in 0..n_t {
                        table[base + dk] += c * k * cosines[dk];
                    }
                }
            }
        }
        let n = n_r * n_t;
        let mut out = DenseMatrix::zeros(n, n);
        for r in 0..n_r {
            for k in 0..n_t {
                let i = r * n_t + k;
                let row = &mut out.data[i * n..(i + 1) * n];
                for s in 0..n_r {
                    let w = self.omega[s] * dth;
                    let base = (r * n_r + s) * n_t;
                    for l in 0..n_t {
                        let dk = (k + n_t - l) % n_t;
                        row[s * n_t + l] = table[base + dk] * w;
                    }
                }
            }
        }
        out
    }
}

fn build(n_r: usize, n_theta: usize, hyper: bool) -> Result<KernelMatrix> {
    let basis = DiskBasis::new(n_r, n_theta, hyper);
    let (t, wt, _, pts) = disk_grid(n_r, n_theta);
    let dth = TAU / n_theta as f64;
    let mut weights = Vec::with_capacity(pts.len());
    for r in 0..n_r {
        let w = if hyper { wt[r] * t[r] * t[r] } else { wt[r] };
        weights.extend(core::iter::repeat(w * dth).take(n_theta));
    }
    Ok(KernelMatrix {
        tag: if hyper { OperatorTag::R1_3D } else { OperatorTag::S1_3D },
        matrix: basis.dense(),
        nodes: pts,
        weights,
        weight_class: if hyper { WeightClass::Sqrt } else { WeightClass::InverseSqrt },
        eps: None,
        alpha: None,
        basis: Some(basis),
    })
}

pub(super) fn op_s1(n_r: usize, n_theta: usize) -> Result<KernelMatrix> {
    build(n_r, n_theta, false)
}

pub(super) fn op_r1(n_r: usize, n_theta: usize) -> Result<KernelMatrix> {
    build(n_r, n_theta, true)
}
