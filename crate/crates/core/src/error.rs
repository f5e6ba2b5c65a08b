use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("group closure exceeds {limit} elements")]
    TooLarge { limit: usize },

    #[error("trivial group rejected (order must exceed 1)")]
    TrivialGroup,

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("operation requires a dense multiplication table (order {0} exceeds dense limit)")]
    NotDense(usize),

    #[error("functions live on different groups")]
    GroupMismatch,

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("character table certification failed: {0}")]
    Certification(String),

    #[error("malformed group file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
