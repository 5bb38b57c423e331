use thiserror::Error;

/// Errors produced by the analyzers, parsers and simulators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{what} exceeded the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
