use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("no rows with variable {variable} = {value}")]
    EmptyStratum { variable: usize, value: u8 },

    #[error("edge ({0}, {1}) would create a directed cycle")]
    Cycle(usize, usize),

    #[error("graph contains a directed cycle")]
    CycleDetected,

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("node count mismatch: {left} vs {right}")]
    NodeCountMismatch { left: usize, right: usize },

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("singular design matrix; dependent columns: {columns:?}")]
    SingularDesign { columns: Vec<String> },

    #[error("missing value for split variable {0}")]
    MissingFeature(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
