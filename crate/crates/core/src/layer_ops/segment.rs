//! Segment operators in Chebyshev bases.
//!
//! `S₁` acts on `φ = ψ/√(1-y²)` sampled at first-kind Chebyshev nodes, using
//! `S₁[T_k/√(1-y²)] = T_k/(2k)` and `S₁[1/√(1-y²)] = ½ log 2`.
//!
//! `R₁` acts on `φ = √(1-y²)·ψ` at second-kind nodes and is built from its
//! integration-by-parts form `R₁φ = (1/2π) p.v.∫ φ'(y)/(y-x) dy`:
//! differentiation maps `√(1-y²) U_k` to `-(k+1) T_{k+1}/√(1-y²)`, and the
//! principal-value operator maps `T_m/√(1-y²)` to `π U_{m-1}`.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use super::{KernelMatrix, OperatorTag, WeightClass};
use crate::linalg::DenseMatrix;
use crate::quadrature::{chebyshev_first, chebyshev_second};
use crate::special::cheb_u;

pub(super) fn op_s1(n: usize) -> KernelMatrix {
    let rule = chebyshev_first(n);
    let theta: Vec<f64> = rule.nodes.iter().map(|x| x.acos()).collect();
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = 0.5 * LN_2;
            for k in 1..n {
                let kf = k as f64;
                s += (kf * theta[i]).cos() * (kf * theta[j]).cos() / kf;
            }
            let v = s / n as f64;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    KernelMatrix {
        tag: OperatorTag::S1_2D,
        matrix: m,
        nodes: rule.nodes.iter().map(|&x| [x, 0.0]).collect(),
        weights: rule.weights,
        weight_class: WeightClass::InverseSqrt,
        eps: None,
        alpha: None,
        basis: None,
    }
}

/// Tangential derivative, `U`-coefficients of `ψ` to `T`-coefficients of
/// `φ'·√(1-y²)`.
fn derivative(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n + 1, n, |m, k| if m == k + 1 { -((k + 1) as f64) } else { 0.0 })
}

/// Principal value `p.v.∫ ·/(y-x) dy`, `T`-coefficients over `√(1-y²)` to
/// `U`-coefficients.
fn cauchy(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n + 1, |k, m| if m == k + 1 { PI } else { 0.0 })
}

pub(super) fn op_r1(n: usize) -> KernelMatrix {
    let rule = chebyshev_second(n);
    let basis = DenseMatrix::from_fn(n, n, |i, k| cheb_u(k, rule.nodes[i]));
    // Gauss rule exact for U_k U_l, k + l ≤ 2n - 1
    let analysis = DenseMatrix::from_fn(n, n, |k, j| 2.0 / PI * rule.weights[j] * basis[(j, k)]);
    let hd = cauchy(n).matmul(&derivative(n)).scale(0.5 / PI);
    let matrix = basis.matmul(&hd).matmul(&analysis);
    KernelMatrix {
        tag: OperatorTag::R1_2D,
        matrix,
        nodes: rule.nodes.iter().map(|&x| [x, 0.0]).collect(),
        weights: rule.weights,
        weight_class: WeightClass::Sqrt,
        eps: None,
        alpha: None,
        basis: None,
    }
}
