use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("mismatched shapes: {0}")]
    Mismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
