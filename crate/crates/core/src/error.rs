use thiserror::Error;

use crate::model::VertexId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),

    #[error("cost model does not match the instance: {0}")]
    ModelMismatch(String),

    #[error("missing adjacent cost for 2-path ({0}, {1}, {2})")]
    MissingTriple(VertexId, VertexId, VertexId),

    #[error("tour is not valid for this graph: {0}")]
    InvalidTour(String),

    #[error("qspp instance contains a directed cycle")]
    CyclicGraph,

    #[error("no path from source to sink")]
    NoPath,

    #[error("path is not an s-t path of this reduction: {0}")]
    ForeignPath(String),

    #[error("enumeration cap exceeded: {count} > {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("approximation scheme requires nonnegative weights; use the exact solver instead")]
    NegativeWeights,

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("instance file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
