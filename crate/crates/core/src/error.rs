use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("vertex labels are not distinct")]
    DuplicateLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid json: {0}")]
    Json(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}

/// Violated tree-decomposition axiom, with a counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdViolation {
    #[error("decomposition is for {found} vertices, graph has {expected}")]
    VertexCount { expected: usize, found: usize },
    #[error("vertex {0} is in no bag")]
    UncoveredVertex(Vertex),
    #[error("no bag contains both endpoints of edge {0}-{1}")]
    UncoveredEdge(Vertex, Vertex),
    #[error("bags containing vertex {0} do not form a connected subtree")]
    Disconnected(Vertex),
    #[error("decomposition tree is not a tree")]
    NotATree,
    #[error("bag {bag} mentions vertex {vertex} outside the graph")]
    BadVertex { bag: usize, vertex: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("forbidden vertex {0} is not in the graph")]
    ForbiddenOutOfRange(Vertex),
    #[error("designated set is not a directed feedback vertex set (cycle {0:?} survives)")]
    NotAFeedbackSet(Vec<Vertex>),
    #[error("the given set is not a valid solution")]
    InvalidSolution,
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(#[from] TdViolation),
    #[error("precondition unmet: {0}")]
    Precondition(String),
    #[error("recursion guard tripped: {0}")]
    RecursionGuard(String),
    #[error("solver produced an invalid witness ({0})")]
    InvalidWitness(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
