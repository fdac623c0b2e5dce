use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
