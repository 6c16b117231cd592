use alloc::string::String;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("patch of half-width {eps} comes within d_min = {d_min} of an interface point (gap {gap})")]
    SeparationViolation { eps: f64, d_min: f64, gap: f64 },
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("mesh generation failed: {0}")]
    MeshFailure(String),
    #[error("singular system: no essential boundary condition")]
    SingularSystem,
    #[error("linear solver failed: {0}")]
    SolverFailure(String),
    #[error("truncation radius too small: one-sided values {lower} and {upper} differ by more than 20%")]
    TruncationTooSmall { lower: f64, upper: f64 },
    #[error("adaptive quadrature did not converge within depth {depth}")]
    QuadratureFailure { depth: usize },
    #[error("kernel evaluated at coincident points")]
    SingularEvaluation,
    #[error("condition estimate {estimate:e} exceeds 1e12")]
    IllConditioned { estimate: f64 },
    #[error("source point at distance {dist} from the boundary, need at least {need}")]
    SourceTooCloseToBoundary { dist: f64, need: f64 },
    #[error("need at least 3 usable rows, have {have}")]
    InsufficientData { have: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
