//! Kernels and boundary integral operators.
//!
//! Reference operators live on `𝔻₁`, the segment `(-1, 1)` or the unit
//! disk. Densities are stored by their regular part `ψ` at quadrature
//! nodes, with the endpoint behavior carried by a [`WeightClass`]:
//! `φ = ψ/√(1-|x|²)` for `InverseSqrt`, `φ = √(1-|x|²)·ψ` for `Sqrt`.
//! Operator matrices map nodal `ψ` to nodal values of the image.

mod disk;
mod green;
mod halfspace;
mod homogeneous;
mod potentials;
mod segment;
mod teps;
mod veps;

pub use disk::{disk_grid, DiskBasis};
pub use green::{green_free, green_grad_y};
pub use halfspace::{half_space_kernel_eval, HalfSpaceKernel, ImageType};
pub use homogeneous::{class_defects, k_eps_2d, k_eps_3d};
pub use potentials::{jump_check, random_smooth_density, ClosedCurve, JumpReport};
pub use teps::{op_Teps_P, teps_residual, TepsVariant};
pub use veps::{op_Veps, veps_alpha, veps_inverse_apply, veps_inverse_identities, VepsIdentities};

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::{DenseMatrix, Lu};
use crate::{Error, Point, Result};

/// Condition estimates above this are rejected by the solvers.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefGeometry {
    Segment,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    InverseSqrt,
    Sqrt,
    Plain,
}

impl WeightClass {
    /// Factor `φ/ψ` at a point with `|x|² = r2`.
    pub fn factor(self, r2: f64) -> f64 {
        match self {
            WeightClass::InverseSqrt => 1.0 / (1.0 - r2).sqrt(),
            WeightClass::Sqrt => (1.0 - r2).sqrt(),
            WeightClass::Plain => 1.0,
        }
    }
}

/// A density on `𝔻₁` given by its regular part at quadrature nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryDensity {
    pub geometry: RefGeometry,
    pub nodes: Vec<Point>,
    /// Pairing weights: `⟨φ, 1⟩ = Σ wᵢ ψᵢ`.
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub weight_class: WeightClass,
}

impl BoundaryDensity {
    /// `⟨φ, 1⟩`.
    pub fn mean(&self) -> f64 {
        self.weights.iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// `φ` at node `i`.
    pub fn density_at(&self, i: usize) -> f64 {
        let p = self.nodes[i];
        self.values[i] * self.weight_class.factor(p[0] * p[0] + p[1] * p[1])
    }

    /// The same nodes and class with new values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, ..self.clone() }
    }
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    S1_2D,
    S1_3D,
    R1_2D,
    R1_3D,
    Veps,
    Teps_P,
}

/// Dense discretization of a reference operator.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub tag: OperatorTag,
    pub matrix: DenseMatrix,
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
    /// Class of the densities the matrix acts on.
    pub weight_class: WeightClass,
    pub eps: Option<f64>,
    /// `α = ½ log γ(0)` for `V_ε`.
    pub alpha: Option<f64>,
    /// Spectral data of disk operators, used by the solvers.
    pub basis: Option<DiskBasis>,
}

impl KernelMatrix {
    pub fn geometry(&self) -> RefGeometry {
        match self.tag {
            OperatorTag::S1_3D | OperatorTag::R1_3D => RefGeometry::Disk,
            _ => RefGeometry::Segment,
        }
    }

    /// A density on this operator's nodes.
    pub fn density(&self, values: Vec<f64>) -> BoundaryDensity {
        BoundaryDensity {
            geometry: self.geometry(),
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            values,
            weight_class: self.weight_class,
        }
    }

    /// Density with `ψ(x) = f(x)` at the nodes.
    pub fn density_from(&self, f: impl Fn(Point) -> f64) -> BoundaryDensity {
        self.density(self.nodes.iter().map(|&p| f(p)).collect())
    }

    /// Nodal values of the image of `density`.
    pub fn apply(&self, density: &BoundaryDensity) -> Vec<f64> {
        self.matrix.matvec(&density.values)
    }
}

/// Discretization of `S₁`: the logarithmic kernel `-(1/2π) log|x-y|` on the
/// segment, `1/(4π|x-y|)` on the disk. `n` is the node count on the segment
/// and the number of radial and angular nodes on the disk.
#[allow(non_snake_case)]
pub fn op_S1(geometry: RefGeometry, n: usize) -> Result<KernelMatrix> {
    if n < 4 {
        return Err(Error::InvalidInput(alloc::format!("need n ≥ 4, got {n}")));
    }
    match geometry {
        RefGeometry::Segment => Ok(segment::op_s1(n)),
        RefGeometry::Disk => disk::op_s1(n, n),
    }
}

/// Discretization of the hypersingular `R₁`: `(1/2π) f.p.∫ φ/|x-y|²` on the
/// segment, `(1/4π) f.p.∫ φ/|x-y|³` on the disk.
#[allow(non_snake_case)]
pub fn op_R1(geometry: RefGeometry, n: usize) -> Result<KernelMatrix> {
    if n < 4 {
        return Err(Error::InvalidInput(alloc::format!("need n ≥ 4, got {n}")));
    }
    match geometry {
        RefGeometry::Segment => Ok(segment::op_r1(n)),
        RefGeometry::Disk => disk::op_r1(n, n),
    }
}

fn solve_dense(k: &KernelMatrix, rhs: &BoundaryDensity) -> Result<Vec<f64>> {
    let lu = Lu::factor(&k.matrix)?;
    let estimate = lu.condition_estimate();
    if !(estimate <= MAX_CONDITION) {
        return Err(Error::IllConditioned { estimate });
    }
    Ok(lu.solve(&rhs.values))
}

fn solve_checked(k: &KernelMatrix, rhs: &BoundaryDensity, expect: [OperatorTag; 2]) -> Result<BoundaryDensity> {
    if !expect.contains(&k.tag) {
        return Err(Error::InvalidInput(alloc::format!("operator {:?} not accepted here", k.tag)));
    }
    if rhs.values.len() != k.nodes.len() {
        return Err(Error::InvalidInput("right-hand side is not on the operator nodes".into()));
    }
    let values = match &k.basis {
        Some(b) => {
            let estimate = b.condition();
            if !(estimate <= MAX_CONDITION) {
                return Err(Error::IllConditioned { estimate });
            }
            b.solve(&rhs.values)
        }
        None => solve_dense(k, rhs)?,
    };
    Ok(k.density(values))
}

/// Solves `S₁φ = rhs`; `rhs.values` are right-hand side values at the nodes.
#[allow(non_snake_case)]
pub fn solve_S1(k: &KernelMatrix, rhs: &BoundaryDensity) -> Result<BoundaryDensity> {
    solve_checked(k, rhs, [OperatorTag::S1_2D, OperatorTag::S1_3D])
}

/// Solves `R₁φ = rhs`.
#[allow(non_snake_case)]
pub fn solve_R1(k: &KernelMatrix, rhs: &BoundaryDensity) -> Result<BoundaryDensity> {
    solve_checked(k, rhs, [OperatorTag::R1_2D, OperatorTag::R1_3D])
}

/// Published equilibrium densities on `𝔻₁` with `S₁φ ≡ 1` or `R₁φ ≡ 1`,
/// as `(φ, ⟨φ, 1⟩)`.
pub mod equilibrium {
    use super::PI;

    pub fn s1_segment(x: f64) -> f64 {
        2.0 / (core::f64::consts::LN_2 * (1.0 - x * x).sqrt())
    }

    pub const S1_SEGMENT_MEAN: f64 = 2.0 * PI / core::f64::consts::LN_2;

    pub fn r1_segment(x: f64) -> f64 {
        -2.0 * (1.0 - x * x).sqrt()
    }

    pub const R1_SEGMENT_MEAN: f64 = -PI;

    pub fn s1_disk(r2: f64) -> f64 {
        4.0 / (PI * (1.0 - r2).sqrt())
    }

    pub const S1_DISK_MEAN: f64 = 8.0;

    pub fn r1_disk(r2: f64) -> f64 {
        -(1.0 - r2).sqrt() / PI
    }

    pub const R1_DISK_MEAN: f64 = -2.0 / 3.0;
}
