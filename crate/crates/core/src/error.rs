use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("boundary mismatch: {left} does not match {right}")]
    BoundaryMismatch { left: String, right: String },

    #[error("decoration lives on {found}, but the apex is {expected}")]
    DecorationMismatch { expected: String, found: String },

    #[error("equivalence search has {free} unconstrained apex elements (limit {limit})")]
    ApexTooLarge { free: usize, limit: usize },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("rate constant must be positive, got {0}")]
    NonPositiveRate(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid step: {0}")]
    InvalidStep(String),

    #[error("vector field is not linear: {0}")]
    Nonlinear(String),

    #[error("invalid flow specification: {0}")]
    InvalidFlow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A syntax or validation error in textual input, with a 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
