use thiserror::Error;

/// Errors produced by field construction and the analysis routines.
///
/// The variants are coarse on purpose: the command-line frontend maps each
/// one to a distinct exit status.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A computed quantity contradicts a proven identity. The message carries
    /// the parameters needed to reproduce it.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// The requested field or job exceeds a configured resource limit.
    #[error("resource limit: {0}")]
    Resource(String),

    /// Supplied modulus is not a monic irreducible polynomial.
    #[error("invalid modulus {digits}: {reason}")]
    Modulus { digits: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
