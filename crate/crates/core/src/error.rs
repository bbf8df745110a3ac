use thiserror::Error;

/// Failure modes shared by builders, evaluators, and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A query point lies outside the model's domain, or a domain is malformed.
    #[error("region: {0}")]
    Region(String),

    /// Construction input violates a precondition (duplicate knots, missing
    /// values, mismatched lengths, non-finite numbers, ...).
    #[error("invalid input: {0}")]
    Spec(String),

    /// The requested combination is deliberately not provided.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn region(msg: impl Into<String>) -> Self {
        Error::Region(msg.into())
    }

    pub(crate) fn spec(msg: impl Into<String>) -> Self {
        Error::Spec(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
