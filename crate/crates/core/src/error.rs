use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape error: {0}")]
    Shape(String),
    #[error("component is not polynomial in the fibre variables: {0}")]
    NotPolynomialInP(String),
    #[error("dimension {0} is not supported here")]
    Dimension(usize),
    #[error("connection is not special (trace {0}); project it with special_part first")]
    NotSpecial(String),
    #[error("weight mismatch: {0}")]
    Weight(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
