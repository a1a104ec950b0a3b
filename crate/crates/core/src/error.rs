use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("mixed exact and float arithmetic: {0}")]
    ModeMismatch(String),

    #[error("singular or degenerate input: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("construction failed verification: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
