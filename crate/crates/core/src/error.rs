use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("relation endpoint out of range: ({0}, {1})")]
    EndpointOutOfRange(usize, usize),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("not a factor: {0}")]
    NotAFactor(String),
    #[error("not an embedding: {0}")]
    NotAnEmbedding(String),
    #[error("not an ef-pair: {0}")]
    NotAnEfPair(String),
    #[error("map is not surjective: `{0}` has no preimage")]
    NotSurjective(String),
    #[error("system is trivial (empty transition relation)")]
    TrivialSystem,
    #[error("system is not total: `{0}` has no successor")]
    NotTotal(String),
    #[error("system is not deterministic: `{0}`")]
    NotDeterministic(String),
    #[error("search space too large: {0}")]
    CapExceeded(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("block code undefined on `{0}`")]
    CodeUndefined(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("empty shift: {0}")]
    EmptyShift(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid thread: {0}")]
    InvalidThread(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
