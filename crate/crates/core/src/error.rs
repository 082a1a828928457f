use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unknown vertex {0:?}")]
    Lookup(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("malformed graph: {0}")]
    Graph(String),
    #[error("move not applicable: {0}")]
    Move(String),
    #[error("orientation invariant violated: {0}")]
    Orientation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
