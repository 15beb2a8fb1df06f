use thiserror::Error;

use crate::multigraph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("edge {index} is a loop at vertex {vertex}")]
    Loop { index: usize, vertex: usize },

    #[error("vertex {0} is isolated")]
    IsolatedVertex(VertexId),

    #[error("vertex {vertex} has odd valency {valency}")]
    OddValency { vertex: VertexId, valency: usize },

    #[error("edge {0} is not colored")]
    PartialColoring(EdgeId),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0}")]
    Domain(String),

    #[error("search budget of {budget} nodes exhausted before a decision")]
    Undecided { budget: u64 },

    #[error("internal construction failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
