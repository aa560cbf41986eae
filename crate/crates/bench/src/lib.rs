//! Workload preparation shared by the criterion benchmarks.

use dyncycle_core::graph::centered_batch;
use dyncycle_core::harness::{generate, Op, WeightRegime, WorkloadParams};
use dyncycle_core::{EdgeBatch, VertexId};

/// A vertex update with its incoming and outgoing batches split out.
#[derive(Debug, Clone)]
pub struct Update {
    pub v: VertexId,
    pub incoming: EdgeBatch,
    pub outgoing: EdgeBatch,
}

/// Seeded vertex-update sequence on `n` vertices with average out-degree
/// `degree`. Queries are dropped.
pub fn vertex_updates(
    n: usize,
    updates: usize,
    degree: f64,
    regime: WeightRegime,
    seed: u64,
) -> Vec<Update> {
    let w = generate(&WorkloadParams {
        n,
        seed,
        updates,
        regime,
        avg_degree: degree,
        query_every: 0,
        ..WorkloadParams::default()
    });
    w.ops
        .iter()
        .filter_map(|op| match op {
            Op::VertexUpdate {
                v,
                incoming,
                outgoing,
            } => Some(Update {
                v: *v,
                incoming: centered_batch(*v, incoming, &[]),
                outgoing: centered_batch(*v, &[], outgoing),
            }),
            _ => None,
        })
        .collect()
}
