//! Numerics for small boundary-condition-type perturbations of the
//! conductivity equation `-div(γ∇u) = f` on a planar domain.
//!
//! A Dirichlet patch placed in the Neumann part of the boundary (or the
//! reverse) of half-width ε changes the potential at interior points by an
//! amount governed by a capacity-like smallness measure of the patch. This
//! crate holds everything needed to compute those quantities and compare
//! them with the first-order expansions:
//!
//! - [`geometry`]: domains, boundary partitions, patches, the flattening map.
//! - [`mesh`] and [`fem`]: graded triangulations and a P1 solver for mixed
//!   problems.
//! - [`capacity`]: `cap(ω)`, the Neumann capacity `e(ω)`, and the geometric
//!   surrogates for `e`.
//! - [`layer_ops`]: layer potentials, half-space kernels, and the reference
//!   operators `S₁`, `R₁`, `V_ε`, `T_ε` on the segment and the disk.
//! - [`asymptotics`]: the fundamental solution `N(x, y)` and the predicted
//!   corrections.
//! - [`fit`]: rate and coefficient fits over ε-sweeps.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod asymptotics;
pub mod capacity;
pub mod error;
pub mod fem;
pub mod fit;
pub mod geometry;
pub mod layer_ops;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};

/// A point in the plane.
pub type Point = [f64; 2];
