//! The fundamental solution `N(x, y)` of the background problem and the
//! leading-order corrections it feeds.
//!
//! `N(x, ·)` solves `-div(γ∇N) = δ_x` with `N = 0` on the essential part of
//! the boundary and `γ∂N/∂n = 0` elsewhere. It is split as
//! `N = G(x, ·)/γ(x) + R`, and only the smooth corrector `R` is computed:
//!
//! - `-div(γ∇R) = ∇γ·∇G/γ(x)` in Ω,
//! - `R = -G/γ(x)` on the essential boundary,
//! - `γ∂R/∂n = -γ ∂G/∂n / γ(x)` on the natural boundary.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::fem::{solve_mixed_singular, ScalarField};
use crate::geometry::Conductivity;
use crate::layer_ops::equilibrium;
use crate::mesh::{EdgeLabel, Locator, Mesh};
use crate::{Error, Point, Result};

const ALL_LABELS: [EdgeLabel; 3] = [EdgeLabel::Dirichlet, EdgeLabel::Neumann, EdgeLabel::Patch];

fn green(x: Point, y: Point) -> f64 {
    let r2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
    -r2.ln() / (4.0 * PI)
}

fn green_grad_y(x: Point, y: Point) -> Point {
    let d = [x[0] - y[0], x[1] - y[1]];
    let r2 = d[0] * d[0] + d[1] * d[1];
    if r2 == 0.0 {
        return [0.0, 0.0];
    }
    [d[0] / (2.0 * PI * r2), d[1] / (2.0 * PI * r2)]
}

fn boundary_distance(mesh: &Mesh, x: Point) -> f64 {
    mesh.boundary_edges
        .iter()
        .map(|e| {
            let (a, b) = (mesh.nodes[e.nodes[0]], mesh.nodes[e.nodes[1]]);
            let ab = [b[0] - a[0], b[1] - a[1]];
            let t = (((x[0] - a[0]) * ab[0] + (x[1] - a[1]) * ab[1]) / (ab[0] * ab[0] + ab[1] * ab[1])).clamp(0.0, 1.0);
            ((x[0] - a[0] - t * ab[0]).powi(2) + (x[1] - a[1] - t * ab[1]).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `N(x, ·)` for one source point, with its FEM corrector.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub x: Point,
    pub gamma_x: f64,
    pub corrector: ScalarField,
    locator: Locator,
}

impl FundamentalSolution {
    /// Solves the corrector problem for the source `x`. `essential` lists the
    /// edge labels carrying `N = 0`.
    pub fn new(mesh: &Arc<Mesh>, gamma: &Conductivity, essential: &[EdgeLabel], x: Point) -> Result<Self> {
        let dist = boundary_distance(mesh, x);
        let need = 4.0 * mesh.grading.h;
        if dist < need {
            return Err(Error::SourceTooCloseToBoundary { dist, need });
        }
        let gx = gamma.value(x);
        let natural: Vec<EdgeLabel> = ALL_LABELS.iter().copied().filter(|l| !essential.contains(l)).collect();
        let source = |y: Point| {
            let gg = gamma.gradient(y);
            let dg = green_grad_y(x, y);
            (gg[0] * dg[0] + gg[1] * dg[1]) / gx
        };
        let singular = if gamma.is_constant() { None } else { Some((x, 3.0 * mesh.grading.h)) };
        let corrector = solve_mixed_singular(
            mesh,
            gamma,
            &source,
            singular,
            essential,
            &|y, _| -green(x, y) / gx,
            &natural,
            &|_, y, n| {
                let dg = green_grad_y(x, y);
                -gamma.value(y) * (dg[0] * n[0] + dg[1] * n[1]) / gx
            },
        )?;
        let locator = corrector.locator();
        Ok(Self { x, gamma_x: gx, corrector, locator })
    }

    /// Corrector value at `y`, falling back to the nearest node for points
    /// on the curved boundary just outside the polygonal mesh.
    pub fn corrector_at(&self, y: Point) -> f64 {
        self.corrector
            .eval(&self.locator, y)
            .unwrap_or_else(|| self.corrector.values[self.corrector.mesh.nearest_node(y)])
    }

    /// `N(x, y)`.
    pub fn eval(&self, y: Point) -> Result<f64> {
        if y == self.x {
            return Err(Error::SingularEvaluation);
        }
        Ok(green(self.x, y) / self.gamma_x + self.corrector_at(y))
    }

    /// `∂N/∂n_y(x, y₀)` at a boundary point with outward normal `normal`,
    /// from one-sided difference quotients at depths `s, 2s, 4s`
    /// extrapolated to `s → 0`.
    pub fn normal_derivative(&self, y0: Point, normal: Point, s: f64) -> Result<f64> {
        let n0 = self.eval(y0)?;
        let mut acc = 0.0;
        for (c, k) in [(8.0 / 3.0, 1.0), (-2.0, 2.0), (1.0 / 3.0, 4.0)] {
            let d = k * s;
            let y = [y0[0] - d * normal[0], y0[1] - d * normal[1]];
            acc += c * (n0 - self.eval(y)?) / d;
        }
        Ok(acc)
    }
}

/// `N(x, y)` of the background problem on `mesh`.
#[allow(non_snake_case)]
pub fn fundamental_solution_N(
    mesh: &Arc<Mesh>,
    gamma: &Conductivity,
    essential: &[EdgeLabel],
    x: Point,
    y: Point,
) -> Result<f64> {
    FundamentalSolution::new(mesh, gamma, essential, x)?.eval(y)
}

/// First-order coefficients: `π` (2D Dirichlet patch), `4` (3D Dirichlet
/// patch), `a₂ = π/2`, `a₃ = 1/3` (Neumann patches).
pub const DIRICHLET_COEFF_2D: f64 = PI;
pub const DIRICHLET_COEFF_3D: f64 = 4.0;
pub const NEUMANN_COEFF_2D: f64 = FRAC_PI_2;
pub const NEUMANN_COEFF_3D: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionVariant {
    DirichletPatch2D,
    DirichletPatch3DFormula,
    NeumannPatch2D,
    NeumannPatch3DFormula,
}

impl ExpansionVariant {
    pub fn dimension(self) -> usize {
        match self {
            Self::DirichletPatch2D | Self::NeumannPatch2D => 2,
            _ => 3,
        }
    }

    pub fn is_dirichlet(self) -> bool {
        matches!(self, Self::DirichletPatch2D | Self::DirichletPatch3DFormula)
    }

    pub fn coefficient(self) -> f64 {
        match self {
            Self::DirichletPatch2D => DIRICHLET_COEFF_2D,
            Self::DirichletPatch3DFormula => DIRICHLET_COEFF_3D,
            Self::NeumannPatch2D => NEUMANN_COEFF_2D,
            Self::NeumannPatch3DFormula => NEUMANN_COEFF_3D,
        }
    }

    /// `1/|log ε|`, `ε`, `ε²` or `ε³`.
    pub fn leading_order(self, eps: f64) -> f64 {
        match self {
            Self::DirichletPatch2D => 1.0 / eps.ln().abs(),
            Self::DirichletPatch3DFormula => eps,
            Self::NeumannPatch2D => eps * eps,
            Self::NeumannPatch3DFormula => eps * eps * eps,
        }
    }

    fn from_parts(dirichlet: bool, d: usize) -> Self {
        match (dirichlet, d) {
            (true, 2) => Self::DirichletPatch2D,
            (true, _) => Self::DirichletPatch3DFormula,
            (false, 2) => Self::NeumannPatch2D,
            (false, _) => Self::NeumannPatch3DFormula,
        }
    }
}

/// A predicted correction `u_ε(x) - u₀(x) ≈ leading_coefficient · leading_order(ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionPrediction {
    pub variant: ExpansionVariant,
    pub x: Vec<f64>,
    pub leading_coefficient: f64,
}

impl ExpansionPrediction {
    /// Dirichlet patch: `-c γ(0) u₀(0) N(x, 0)`.
    pub fn dirichlet(x: &[f64], n_val: f64, u00: f64, gamma0: f64, d: usize) -> Self {
        let variant = ExpansionVariant::from_parts(true, d);
        Self { variant, x: x.to_vec(), leading_coefficient: -variant.coefficient() * gamma0 * u00 * n_val }
    }

    /// Neumann patch: `a_d γ(0) ∂u₀/∂n(0) ∂N/∂n_y(x, 0)`.
    pub fn neumann(x: &[f64], dn_n_val: f64, du0dn0: f64, gamma0: f64, d: usize) -> Self {
        let variant = ExpansionVariant::from_parts(false, d);
        Self { variant, x: x.to_vec(), leading_coefficient: variant.coefficient() * gamma0 * du0dn0 * dn_n_val }
    }

    pub fn leading_order(&self, eps: f64) -> f64 {
        self.variant.leading_order(eps)
    }

    pub fn predicted_delta(&self, eps: f64) -> f64 {
        self.leading_coefficient * self.leading_order(eps)
    }
}

/// `-(π/|log ε|) γ(0) u₀(0) N(x, 0)` for `d = 2`, `-4ε γ(0) u₀(0) N(x, 0)`
/// for `d = 3`.
pub fn predict_dirichlet_patch(x: &[f64], eps: f64, n_val: f64, u00: f64, gamma0: f64, d: usize) -> f64 {
    ExpansionPrediction::dirichlet(x, n_val, u00, gamma0, d).predicted_delta(eps)
}

/// `a_d ε^d γ(0) ∂u₀/∂n(0) ∂N/∂n_y(x, 0)`.
pub fn predict_neumann_patch(x: &[f64], eps: f64, dn_n_val: f64, du0dn0: f64, gamma0: f64, d: usize) -> f64 {
    ExpansionPrediction::neumann(x, dn_n_val, du0dn0, gamma0, d).predicted_delta(eps)
}

/// Predicted change of the compliance `∫ f u`. `value0` is `u₀(0)` for the
/// Dirichlet variants and `∂u₀/∂n(0)` for the Neumann ones.
pub fn predict_compliance_delta(variant: ExpansionVariant, eps: f64, gamma0: f64, value0: f64) -> f64 {
    let magnitude = variant.coefficient() * variant.leading_order(eps) * gamma0 * value0 * value0;
    if variant.is_dirichlet() {
        -magnitude
    } else {
        magnitude
    }
}

/// One coefficient identity: the theorem constant and its value from the
/// equilibrium-distribution means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub name: &'static str,
    pub coefficient: f64,
    pub from_means: f64,
}

impl CrossCheck {
    pub fn defect(&self) -> f64 {
        (self.coefficient - self.from_means).abs()
    }
}

/// `4 = ⟨S₁⁻¹1,1⟩/2` on the disk, `π/2 = -⟨R₁⁻¹1,1⟩/2` on the segment,
/// `1/3 = -⟨R₁⁻¹1,1⟩/2` on the disk, with the published means.
pub fn coefficient_cross_checks() -> [CrossCheck; 3] {
    [
        CrossCheck { name: "4 = 8/2", coefficient: DIRICHLET_COEFF_3D, from_means: equilibrium::S1_DISK_MEAN / 2.0 },
        CrossCheck {
            name: "pi/2 = pi/2",
            coefficient: NEUMANN_COEFF_2D,
            from_means: -equilibrium::R1_SEGMENT_MEAN / 2.0,
        },
        CrossCheck {
            name: "1/3 = (2/3)/2",
            coefficient: NEUMANN_COEFF_3D,
            from_means: -equilibrium::R1_DISK_MEAN / 2.0,
        },
    ]
}
