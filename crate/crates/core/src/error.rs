use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} C({n}, {k}) overflows")]
    Overflow { what: &'static str, n: u64, k: i64 },
    #[error("instance too large: {0}")]
    ScaleGuard(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
