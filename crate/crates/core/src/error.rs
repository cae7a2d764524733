use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("arity mismatch: operation of degree {expected} applied to {got} arguments")]
    ArityMismatch { expected: usize, got: usize },

    #[error("composition slot {slot} out of range (must be 0..={max})")]
    SlotOutOfRange { slot: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error(
        "positivity violation: eigenvalue {min_eigenvalue:.6e} below clip tolerance \
         {clip_tol:.3e}; increase the truncation dimension N"
    )]
    PositivityViolation { min_eigenvalue: f64, clip_tol: f64 },

    #[error(
        "coherent state leakage {leakage:.3e} exceeds threshold {threshold:.3e}; \
         increase the truncation dimension N"
    )]
    LeakageExceeded { leakage: f64, threshold: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("operators live on different Fock spaces")]
    SpaceMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;
