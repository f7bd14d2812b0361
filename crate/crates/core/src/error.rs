use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("context mismatch: {0}")]
    CtxMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("Hilbert data not stabilized by degree {0}; raise the degree bound")]
    NotStabilized(usize),
    #[error("non-generic configuration: {0}")]
    NonGeneric(String),
    #[error("retry bound exhausted: {0}")]
    RetryExhausted(String),
    #[error("mathematical check failed: {0}")]
    CheckFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}
