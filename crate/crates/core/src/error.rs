use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level error: {0}")]
    Level(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not normal (commutator residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("not an R-matrix: ybe residual {ybe:.3e}, unitarity residual {unitarity:.3e}")]
    NotRMatrix { ybe: f64, unitarity: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("numerical degeneracy after {retries} retries: {message}")]
    Numerical { message: String, retries: usize },

    #[error("not equivalent to a normal form: {0}")]
    NotNormalForm(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
