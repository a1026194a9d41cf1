use std::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum RfsoError {
    /// A parameter is outside its documented domain.
    InvalidParameter(String),
    /// A numerical routine failed to converge or produced an
    /// out-of-band result that cannot be attributed to roundoff.
    Numerical(String),
    /// Configuration parsing or validation failed.
    Config(String),
    /// Filesystem output failed.
    Io(String),
}

impl fmt::Display for RfsoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RfsoError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            RfsoError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            RfsoError::Config(msg) => write!(f, "configuration error: {msg}"),
            RfsoError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for RfsoError {}

pub type Result<T> = std::result::Result<T, RfsoError>;
