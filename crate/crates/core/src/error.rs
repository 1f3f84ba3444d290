use thiserror::Error;

/// Errors surfaced by the simulation core.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("initial state is not normalized: |c1|^2 + |c2|^2 = {norm_sqr}")]
    UnnormalizedInitialState { norm_sqr: f64 },

    #[error("kernel lag must be nonnegative, got {0}")]
    NegativeLag(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("integrator could not meet the requested tolerance: {0}")]
    ToleranceNotMet(String),

    #[error("integrator step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("Fock-space truncation too small: need at least {min}, got {got}")]
    TruncationTooSmall { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
