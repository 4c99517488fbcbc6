//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed or unsupported file content.
    #[error("format error: {0}")]
    Format(String),
    /// Image shapes that must agree do not.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Parameter outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
