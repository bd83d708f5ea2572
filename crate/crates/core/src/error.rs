use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("malformed game document: {0}")]
    Malformed(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` has no outgoing edge")]
    NoOutgoingEdge(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge `{0}` -> `{1}`")]
    DuplicateEdge(String, String),
    #[error("non-integer weight `{0}`")]
    NonIntegerWeight(String),
    #[error("weight vector has dimension {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("index {index} out of range (prefix has {len} edges)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("running average is undefined at index 0")]
    ZeroIndex,
    #[error("`{0}` -> `{1}` is not an edge of the game")]
    NotAnEdge(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("illegal move to `{to}` after history of length {history_len} ending in `{from}`")]
    IllegalMove {
        from: String,
        to: String,
        history_len: usize,
    },
    #[error("credit cap {0} saturated")]
    CapSaturated(u64),
    #[error("trace contains no lasso")]
    NoLasso,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
