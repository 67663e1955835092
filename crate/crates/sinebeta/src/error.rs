use thiserror::Error;

/// Errors surfaced by the sampling, quadrature and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An internal numerical consistency check failed (e.g. a monotone
    /// phase produced the wrong root count).
    #[error("consistency error: {0}")]
    Consistency(String),

    /// A configured resource cap (component count, period count,
    /// dilation bound) was exceeded before the goal was reached.
    #[error("resource error: {0}")]
    Resource(String),

    /// A configuration file or CLI flag could not be interpreted.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
