use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} does not exist")]
    MissingVertex(usize),
    #[error("edge {0} does not exist")]
    MissingEdge(EdgeId),
    #[error("edge {0} is a loop")]
    LoopEdge(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid involution: {0}")]
    InvalidInvolution(String),
    #[error("involution is not mixing")]
    NotMixing,
    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("lemma violated: {0}")]
    LemmaViolation(String),
    #[error("polylines of edges {0} and {1} cross")]
    Crossing(EdgeId, EdgeId),
    #[error("certificate mismatch: {0}")]
    Certificate(String),
    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
