use crate::bst::Key;
use thiserror::Error;

/// Errors raised by tree construction, restructuring and the audits.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate key {0}")]
    DuplicateKey(Key),
    #[error("BST order violated at key {0}")]
    OrderViolation(Key),
    #[error("shape is not a single connected rooted tree: {0}")]
    Disconnected(String),
    #[error("key {0} is not in the tree")]
    KeyAbsent(Key),
    #[error("not a valid search path: {0}")]
    InvalidPath(String),
    #[error("after-tree does not match the before-path: {0}")]
    AfterMismatch(String),
    #[error("weight for key {0} must be positive and finite")]
    NonPositiveWeight(Key),
    #[error("set is not subtree-disjoint after the access")]
    NotSubtreeDisjoint,
    #[error("set is not monotone in the after-tree")]
    NotMonotone,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("height diagram has no tree structure")]
    NotTreeStructured,
    #[error("key {0} out of range 1..={1}")]
    OutOfRange(Key, usize),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
