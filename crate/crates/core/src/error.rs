use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {v} is out of range for a graph with {n} vertices")]
    InvalidVertex { v: VertexId, n: usize },

    #[error("edge {u}->{v} is not present")]
    NotPresent { u: VertexId, v: VertexId },

    #[error("edge {u}->{v} is already present")]
    AlreadyPresent { u: VertexId, v: VertexId },

    #[error("invalid edge batch: {0}")]
    InvalidBatch(String),

    #[error("weight {0} is not a finite number")]
    InvalidWeight(f64),

    #[error("threshold must be non-negative, got {0}")]
    InvalidThreshold(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("price function is infeasible on edge {u}->{v} (reduced cost {reduced})")]
    InfeasiblePrices {
        u: VertexId,
        v: VertexId,
        reduced: f64,
    },

    #[error("graph contains a negative edge {u}->{v}; use the price-function routine")]
    NegativeWeight { u: VertexId, v: VertexId },

    #[error("the graph contains a negative cycle")]
    NegativeCyclePresent,

    #[error("a vertex removal is already pending; revert it first")]
    RemovalPending,

    #[error("no vertex removal to revert")]
    NothingToRevert,

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
