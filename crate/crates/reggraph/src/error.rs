//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate edge between '{0}' and '{1}'")]
    DuplicateEdge(String, String),

    #[error("self loop at '{0}'")]
    SelfLoop(String),

    #[error("edge type violation: {0}")]
    EdgeTypeViolation(String),

    #[error("cycle violation: {0}")]
    CycleViolation(String),

    #[error("unknown label '{0}'")]
    UnknownLabel(String),

    #[error("edge is not incident to node '{0}'")]
    NotIncident(String),

    #[error("missing edge between '{0}' and '{1}'")]
    MissingEdge(String, String),

    #[error("node sequence is not a path: {0}")]
    NotAPath(String),

    #[error("bad node sets: {0}")]
    BadSets(String),

    #[error("node sets of the two graphs differ")]
    NodeSetMismatch,

    #[error("instance too large for brute force ({0} nodes, limit {1})")]
    TooLarge(usize, usize),

    #[error("NotOrientable: {0}")]
    NotOrientable(String),

    #[error("internal invariant violation: {0}")]
    InternalInvariantViolation(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("singular conditioning block")]
    SingularConditioningBlock,

    #[error("syntax error at line {line}, column {col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
