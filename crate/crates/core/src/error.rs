use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoints(usize, usize),

    #[error("point {index} is not on the unit sphere (norm {norm})")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("point {index} lies outside [-1, 1]")]
    OutsideInterval { index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("measures or kernels live on different spaces")]
    SpaceMismatch,

    #[error("expected total mass {expected}, found {found}")]
    MassMismatch { expected: f64, found: f64 },

    #[error("Riesz kernel evaluated at coincident nodes {0} and {1}")]
    CoincidentNodes(usize, usize),

    #[error("tabulated kernel cannot be evaluated off its nodes")]
    OffNodeEvaluation,

    #[error("Gram table is not symmetric: |G[{i}][{j}] - G[{j}][{i}]| = {gap}")]
    AsymmetricGram { i: usize, j: usize, gap: f64 },

    #[error("nonpositive weight {weight} on support node {index}")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("kernel is not positive definite: eigenvalue {eigenvalue}")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("negative self-energy {energy}")]
    NegativeSelfEnergy { energy: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular linear system")]
    Singular,

    #[error("kernel family has no analytic gradient: {0}")]
    NonDifferentiable(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
