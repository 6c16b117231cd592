//! The rescaled patch operators `T_ε` built from the frozen-coefficient
//! half-space kernels `L_{A(εx)}`, and their leading-order approximations.
//!
//! Dirichlet patch: for `x, z` on the wall, `x - z ∥ e₁`, so
//! `L_{A(εx)}(εx, εz) = -(|det M|/π)(log ε + log|x-z| + log|M e₁|)`.
//!
//! Neumann patch: the kernel `P(εx, εz)` is
//! `ε⁻² A₂₂/(π √det A |M e₁|²) |x - z|⁻²`, i.e. a multiple of `R₁`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{op_R1, op_S1, KernelMatrix, OperatorTag, RefGeometry};
use crate::geometry::{FlatteningMap, Mat2};
use crate::linalg::{DenseMatrix, sym_sqrt_inv};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TepsVariant {
    DirichletPatch,
    NeumannPatch,
}

fn mat(a: Mat2) -> DenseMatrix {
    DenseMatrix::from_fn(2, 2, |i, j| a[i][j])
}

/// `(|det M|, |M e₁|, A₂₂, √det A)` at `y`.
fn frozen(flat: &FlatteningMap, y: [f64; 2]) -> Result<(f64, f64, f64, f64)> {
    let a = flat.a_field(y);
    let det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det_a > 0.0) {
        return Err(Error::InvalidInput("A(εx) is not positive definite".into()));
    }
    let m = sym_sqrt_inv(&mat(a))?;
    let me1 = (m[(0, 0)].powi(2) + m[(1, 0)].powi(2)).sqrt();
    Ok((1.0 / det_a.sqrt(), me1, a[1][1], det_a.sqrt()))
}

#[allow(non_snake_case)]
pub fn op_Teps_P(flat: &FlatteningMap, eps: f64, n: usize, variant: TepsVariant) -> Result<KernelMatrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(alloc::format!("need 0 < ε < 1, got {eps}")));
    }
    match variant {
        TepsVariant::DirichletPatch => {
            let s1 = op_S1(RefGeometry::Segment, n)?;
            let mut rows = Vec::with_capacity(n);
            for i in 0..n {
                let (det_m, me1, _, _) = frozen(flat, [eps * s1.nodes[i][0], 0.0])?;
                rows.push((det_m / PI * (eps.ln().abs() - me1.ln()), 2.0 * det_m));
            }
            let w = s1.weights.clone();
            let matrix = DenseMatrix::from_fn(n, n, |i, j| rows[i].0 * w[j] + rows[i].1 * s1.matrix[(i, j)]);
            Ok(KernelMatrix { tag: OperatorTag::Teps_P, matrix, eps: Some(eps), ..s1 })
        }
        TepsVariant::NeumannPatch => {
            let r1 = op_R1(RefGeometry::Segment, n)?;
            let mut scale = Vec::with_capacity(n);
            for i in 0..n {
                let (_, me1, a22, sqrt_det) = frozen(flat, [eps * r1.nodes[i][0], 0.0])?;
                scale.push(2.0 * a22 / (sqrt_det * me1 * me1) / (eps * eps));
            }
            let matrix = r1.matrix.scale_rows(&scale);
            Ok(KernelMatrix { tag: OperatorTag::Teps_P, matrix, eps: Some(eps), ..r1 })
        }
    }
}

/// Discrete `ℓ²` operator-norm residual of the leading-order approximation:
/// `‖T_ε - (1/πγ(0))(|log ε|+α)⟨·,1⟩ - (2/γ(0))S₁‖` (Dirichlet patch) or
/// `ε²‖T_ε - (2γ(0)/ε²)R₁‖` (Neumann patch), at `n` nodes.
pub fn teps_residual(flat: &FlatteningMap, eps: f64, n: usize, variant: TepsVariant) -> Result<f64> {
    let t = op_Teps_P(flat, eps, n, variant)?;
    let g0 = flat.gamma_at([0.0, 0.0]);
    let diff = match variant {
        TepsVariant::DirichletPatch => {
            let s1 = op_S1(RefGeometry::Segment, n)?;
            let l = (eps.ln().abs() + 0.5 * g0.ln()) / (PI * g0);
            let approx = DenseMatrix::from_fn(n, n, |i, j| l * s1.weights[j] + 2.0 / g0 * s1.matrix[(i, j)]);
            t.matrix.sub(&approx)
        }
        TepsVariant::NeumannPatch => {
            let r1 = op_R1(RefGeometry::Segment, n)?;
            t.matrix.sub(&r1.matrix.scale(2.0 * g0 / (eps * eps))).scale(eps * eps)
        }
    };
    Ok(diff.spectral_norm())
}
