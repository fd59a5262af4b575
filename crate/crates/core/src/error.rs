use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("oracle scale exceeded: brute force supports N <= {max}, got N = {n}")]
    OracleScale { n: usize, max: usize },

    #[error("scale error: {0}")]
    Scale(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("malformed formulation: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
