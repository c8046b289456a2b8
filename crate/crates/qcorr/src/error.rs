//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace deviates from one by {0:.3e}")]
    NotUnitTrace(f64),
    #[error("negative eigenvalue {0:.3e} beyond tolerance")]
    NotPositive(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}
