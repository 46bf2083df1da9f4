use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    /// A Gram-Schmidt column collapsed (linearly dependent input).
    #[error("matrix is near-singular (column {column} norm {norm:e})")]
    NearSingular { column: usize, norm: f64 },

    #[error("matrix is not positive definite (pivot {index} = {pivot:e})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("triangular matrix is singular at diagonal {index}")]
    SingularTriangular { index: usize },

    #[error("matrix is singular (pivot underflow at column {0})")]
    Singular(usize),

    #[error("conjugate gradient breakdown: p^H G p = {0:e}")]
    Breakdown(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0}: target BER not crossed inside the SNR grid")]
    GapUndefined(String),
}
