use thiserror::Error;

/// Errors raised by the geometric and linear-algebra routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: need at least {1}")]
    InvalidDimension(usize, usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (scaled deviation {0:e})")]
    NotHermitian(f64),

    #[error("basis invariant violated: {0}")]
    BasisInvariant(String),

    #[error("zero vector is not a valid state")]
    ZeroVector,

    #[error("invalid starting vector for the eigensolver")]
    InvalidStart,

    #[error("operator is not an extremal (rank-one) state: {0}")]
    NotExtremal(String),

    #[error("transformation is singular or ill-conditioned (condition number {0:e})")]
    Singular(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
