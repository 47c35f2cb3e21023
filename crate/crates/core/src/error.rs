//! Crate-wide error type.

/// Errors surfaced by library operations.
///
/// `OutOfValidity` is deliberately separate from `InvalidInput`: the former means the
/// requested point lies outside a bound's proven window (callers often treat it as "no
/// information" or 0), the latter means the arguments themselves are malformed.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("outside validity window: {0}")]
    OutOfValidity(String),

    #[error("exact spectrum unavailable: {0}")]
    NoExactSpectrum(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn validity(msg: impl Into<String>) -> Self {
        Error::OutOfValidity(msg.into())
    }

    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { pointer: pointer.into(), message: message.into() }
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    pub fn no_spectrum(msg: impl Into<String>) -> Self {
        Error::NoExactSpectrum(msg.into())
    }
}
