//! Crate-wide error type.

use std::fmt;

/// Errors raised by the numeric kernel, the lab, and the CLI.
#[derive(Debug)]
pub enum Error {
    /// Input outside an operation's domain.
    Domain(String),
    /// An iteration failed to converge or produced unusable values;
    /// the message carries the diagnostics.
    Numeric(String),
    /// Bad command-line or configuration usage.
    Usage(String),
    /// Report or config I/O failure.
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}
