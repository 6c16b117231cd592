//! `V_εφ = (|log ε| + α)⟨φ, 1⟩ + 2π S₁φ` on the segment and its explicit
//! inverse through `S₁⁻¹`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{op_S1, solve_S1, KernelMatrix, OperatorTag, RefGeometry};
use crate::linalg::{norm2, DenseMatrix, Lu};
use crate::{Error, Result};

/// `α = ½ log γ(0)`.
pub fn veps_alpha(gamma0: f64) -> f64 {
    0.5 * gamma0.ln()
}

fn check(eps: f64, gamma0: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) || !(gamma0 > 0.0) {
        return Err(Error::InvalidInput(alloc::format!("need 0 < ε < 1 and γ(0) > 0, got {eps}, {gamma0}")));
    }
    Ok(())
}

#[allow(non_snake_case)]
pub fn op_Veps(eps: f64, gamma0: f64, n: usize) -> Result<KernelMatrix> {
    check(eps, gamma0)?;
    let s1 = op_S1(RefGeometry::Segment, n)?;
    let alpha = veps_alpha(gamma0);
    let l = eps.ln().abs() + alpha;
    let w = s1.weights.clone();
    let matrix = DenseMatrix::from_fn(n, n, |i, j| l * w[j] + TAU * s1.matrix[(i, j)]);
    Ok(KernelMatrix { tag: OperatorTag::Veps, matrix, eps: Some(eps), alpha: Some(alpha), ..s1 })
}

/// `V_ε⁻¹g` by the closed formula in terms of `S₁⁻¹`.
pub fn veps_inverse_apply(s1: &KernelMatrix, eps: f64, alpha: f64, g: &[f64]) -> Result<Vec<f64>> {
    let l = eps.ln().abs() + alpha;
    let sg = solve_S1(s1, &s1.density(g.to_vec()))?;
    let s1one = solve_S1(s1, &s1.density(vec![1.0; g.len()]))?;
    let c = l * sg.mean() / (TAU + l * s1one.mean());
    Ok(sg.values.iter().zip(&s1one.values).map(|(a, b)| (a - c * b) / TAU).collect())
}

/// Defects of the closed-form inverse and mean against the assembled `V_ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VepsIdentities {
    /// `‖V_ε(V_ε⁻¹g) - g‖ / ‖g‖` with the closed-form inverse.
    pub inverse_residual: f64,
    /// `‖formula - LU solve‖ / ‖LU solve‖`.
    pub vs_direct: f64,
    /// `|⟨V_ε⁻¹g, 1⟩ - ⟨S₁⁻¹g,1⟩/(2π + (|log ε|+α)⟨S₁⁻¹1,1⟩)|`, relative.
    pub mean_defect: f64,
}

pub fn veps_inverse_identities(eps: f64, gamma0: f64, n: usize, g: &[f64]) -> Result<VepsIdentities> {
    let v = op_Veps(eps, gamma0, n)?;
    let s1 = op_S1(RefGeometry::Segment, n)?;
    let alpha = veps_alpha(gamma0);
    let formula = veps_inverse_apply(&s1, eps, alpha, g)?;
    let back = v.matrix.matvec(&formula);
    let r: Vec<f64> = back.iter().zip(g).map(|(a, b)| a - b).collect();
    let direct = Lu::factor(&v.matrix)?.solve(g);
    let d: Vec<f64> = formula.iter().zip(&direct).map(|(a, b)| a - b).collect();
    let l = eps.ln().abs() + alpha;
    let sg = solve_S1(&s1, &s1.density(g.to_vec()))?.mean();
    let s1one = solve_S1(&s1, &s1.density(vec![1.0; n]))?.mean();
    let predicted = sg / (TAU + l * s1one);
    let mean: f64 = direct.iter().zip(&v.weights).map(|(a, w)| a * w).sum();
    Ok(VepsIdentities {
        inverse_residual: norm2(&r) / norm2(g),
        vs_direct: norm2(&d) / norm2(&direct),
        mean_defect: (mean - predicted).abs() / predicted.abs().max(f64::MIN_POSITIVE),
    })
}
