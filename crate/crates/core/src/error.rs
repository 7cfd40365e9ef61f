use thiserror::Error;

/// Errors raised by evaluators, quadrature and the verification machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates a precondition (non-positive base, a >= b, shift too far left, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The result would leave the binary64 range.
    #[error("range error: {0}")]
    Range(String),

    /// Adaptive quadrature did not meet its tolerance; `estimate` is the best value found.
    #[error("accuracy error: {message} (best estimate {estimate:e})")]
    Accuracy { estimate: f64, message: String },

    /// A root search found no sign change on the bracket.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
