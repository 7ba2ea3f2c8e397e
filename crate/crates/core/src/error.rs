use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("expected a homogeneous element: {0}")]
    NotHomogeneous(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("matrix is not invertible")]
    Singular,
    #[error("invalid gauge transformation: {0}")]
    InvalidGauge(String),
    #[error("matrix is not in the image of the representation")]
    NotInRepresentation,
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap { what: String, needed: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
