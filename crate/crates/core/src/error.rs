use thiserror::Error;

/// Errors reported by builders, queries and the index file reader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("position {pos} out of range 1..={n}")]
    OutOfRange { pos: usize, n: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("precondition violated: {0}")]
    Contract(String),
    #[error("corrupt index: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
