use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

fn diff(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    if x.len() != y.len() || !(2..=3).contains(&x.len()) {
        return Err(Error::InvalidInput("points must both be in R² or R³".into()));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return Err(Error::SingularEvaluation);
    }
    Ok((d, r))
}

/// Free-space fundamental solution of `-Δ`: `-(1/2π) log|x-y|` in the
/// plane, `1/(4π|x-y|)` in space.
pub fn green_free(x: &[f64], y: &[f64]) -> Result<f64> {
    let (_, r) = diff(x, y)?;
    Ok(if x.len() == 2 { -r.ln() / (2.0 * PI) } else { 1.0 / (4.0 * PI * r) })
}

/// `∇_y G(x, y)`.
pub fn green_grad_y(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let (d, r) = diff(x, y)?;
    let s = if x.len() == 2 { 1.0 / (2.0 * PI * r * r) } else { 1.0 / (4.0 * PI * r * r * r) };
    Ok(d.iter().map(|v| v * s).collect())
}
