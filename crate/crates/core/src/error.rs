use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("empty input: {what}")]
    Empty { what: &'static str },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("infeasible point: {0}")]
    Infeasible(String),

    #[error("misaligned histories: losses {losses}, decisions {decisions}, weights {weights}")]
    MisalignedHistories {
        losses: usize,
        decisions: usize,
        weights: usize,
    },

    #[error("line {line}: malformed token `{token}`")]
    MalformedToken { line: usize, token: String },

    #[error("line {line}: feature indices must be strictly increasing and start at 1")]
    NonincreasingIndex { line: usize },

    #[error("line {line}: more than two distinct labels")]
    TooManyLabels { line: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
