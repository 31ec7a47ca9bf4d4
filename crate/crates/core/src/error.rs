use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation at n_max = {n_max} leaves tail mass {tail:.3e} (tolerance {tol:.1e})")]
    Truncation { n_max: usize, tail: f64, tol: f64 },

    #[error("recurrence normalization {norm} deviates from 1 by more than {tol:.1e}")]
    NonConvergence { norm: f64, tol: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("phase-space grid captures only {mass:.5} of the Wigner mass")]
    GridTooSmall { mass: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
