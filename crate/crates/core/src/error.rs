use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
