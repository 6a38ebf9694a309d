use thiserror::Error;

/// Errors raised by the exact computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid EPPF table: {0}")]
    InvalidTable(String),

    /// An exact re-check of a computed certificate failed. Indicates a bug.
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        detail: detail.into(),
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
