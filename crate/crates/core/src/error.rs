use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes of two inputs do not agree.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter is outside its domain, or parameters are mutually inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Input data violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),
    /// A quantity is undefined for the given inputs (e.g. a metric over zero instances).
    #[error("undefined: {0}")]
    Undefined(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }
}
