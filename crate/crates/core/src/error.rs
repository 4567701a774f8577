use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("content {0} is not covered by the exponent specification")]
    MissingContent(i64),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structural error: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, ZetaError>;
