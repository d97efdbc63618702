use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// serde's message, which carries the line and column
    #[error("malformed json: {0}")]
    Json(String),
    #[error("rate function is negative ({value}) at a path value")]
    NegativeRate { value: f64 },
    #[error("rate function expression failed: {0}")]
    Expr(String),
    #[error("family is not relatively compact: {0}")]
    NotCompact(String),
    #[error("ode integration failed: {0}")]
    Ode(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
