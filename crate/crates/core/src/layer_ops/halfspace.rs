//! Fundamental solutions of `-div(A∇·)` on the lower half-space
//! `{y_d < 0}` with a Neumann (even image) or Dirichlet (odd image) wall.

use alloc::vec::Vec;

use super::green::{green_free, green_grad_y};
use crate::linalg::{sym_eigen, sym_sqrt_inv, DenseMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageType {
    NeumannImage,
    DirichletImage,
}

#[derive(Debug, Clone)]
pub struct HalfSpaceKernel {
    pub a: DenseMatrix,
    /// `A^{-1/2}`.
    pub m: DenseMatrix,
    pub image: ImageType,
    det_m: f64,
    /// `M^{-1}e_d / |M^{-1}e_d|²`.
    shift: Vec<f64>,
    /// `M - 2 shift e_dᵀ`, the image map.
    q: DenseMatrix,
}

impl HalfSpaceKernel {
    pub fn new(a: DenseMatrix, image: ImageType) -> Result<Self> {
        let d = a.rows;
        if a.cols != d || !(2..=3).contains(&d) {
            return Err(Error::InvalidInput("A must be a 2×2 or 3×3 matrix".into()));
        }
        if a.asymmetry() > 1e-12 * a.max_abs() {
            return Err(Error::InvalidInput("A must be symmetric".into()));
        }
        let (eig, _) = sym_eigen(&a);
        if eig.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::InvalidInput("A must be positive definite".into()));
        }
        let m = sym_sqrt_inv(&a)?;
        let det_m = 1.0 / eig.iter().product::<f64>().sqrt();
        // M^{-1} = A M
        let m_inv = a.matmul(&m);
        let col: Vec<f64> = (0..d).map(|i| m_inv[(i, d - 1)]).collect();
        let n2: f64 = col.iter().map(|v| v * v).sum();
        let shift: Vec<f64> = col.iter().map(|v| v / n2).collect();
        let q = DenseMatrix::from_fn(d, d, |i, j| m[(i, j)] - if j == d - 1 { 2.0 * shift[i] } else { 0.0 });
        Ok(Self { a, m, image, det_m, shift, q })
    }

    pub fn dim(&self) -> usize {
        self.a.rows
    }

    pub fn det_m(&self) -> f64 {
        self.det_m
    }

    /// Image of `My` across the mapped wall: `My - 2 y_d M^{-1}e_d/|M^{-1}e_d|²`.
    pub fn image_point(&self, y: &[f64]) -> Vec<f64> {
        self.q.matvec(y)
    }

    /// `‖M² - A^{-1}‖_max`, computed as `‖M A M - I‖_max`.
    pub fn m_squared_defect(&self) -> f64 {
        let d = self.dim();
        self.m.matmul(&self.a).matmul(&self.m).sub(&DenseMatrix::identity(d)).max_abs()
    }

    /// `| |Mx - My| - |Mx - My + 2 y_d M^{-1}e_d/|M^{-1}e_d|²| |` relative to
    /// `|Mx - My|`; zero for `x` on the wall.
    pub fn reflection_defect(&self, x: &[f64], y: &[f64]) -> f64 {
        let mx = self.m.matvec(x);
        let my = self.m.matvec(y);
        let yd = y[self.dim() - 1];
        let a: f64 = mx.iter().zip(&my).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let b: f64 = (0..self.dim())
            .map(|i| (mx[i] - my[i] + 2.0 * yd * self.shift[i]).powi(2))
            .sum::<f64>()
            .sqrt();
        (a - b).abs() / a
    }

    /// `L_A(x, y)` and `∇_y L_A(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<(f64, Vec<f64>)> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::InvalidInput("point dimension does not match A".into()));
        }
        if x == y {
            return Err(Error::SingularEvaluation);
        }
        let sign = match self.image {
            ImageType::NeumannImage => 1.0,
            ImageType::DirichletImage => -1.0,
        };
        let mx = self.m.matvec(x);
        let my = self.m.matvec(y);
        let qy = self.q.matvec(y);
        let g1 = green_free(&mx, &my)?;
        let g2 = green_free(&mx, &qy)?;
        let d1 = self.m.matvec_t(&green_grad_y(&mx, &my)?);
        let d2 = self.q.matvec_t(&green_grad_y(&mx, &qy)?);
        let value = self.det_m * (g1 + sign * g2);
        let grad = d1.iter().zip(&d2).map(|(a, b)| self.det_m * (a + sign * b)).collect();
        Ok((value, grad))
    }
}

/// `L_A(x, y)` and its `y`-gradient.
pub fn half_space_kernel_eval(k: &HalfSpaceKernel, x: &[f64], y: &[f64]) -> Result<(f64, Vec<f64>)> {
    k.eval(x, y)
}
