use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sequence parameters (P={p}, Q={q}): {reason}")]
    InvalidParams { p: i64, q: i64, reason: &'static str },

    #[error("invalid walk configuration: {0}")]
    InvalidConfig(String),

    #[error("index {index} exceeds the configured maximum {limit}")]
    IndexLimit { index: u64, limit: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("certification failed: {0}")]
    Certification(String),
}
