//! Brute-force reference oracles and seeded workload generation.
//!
//! The oracles share no code with the algorithms they check: they carry
//! their own Bellman-Ford and heap-based Dijkstra.

mod oracle;
mod workload;

pub use oracle::{
    oracle_apsp, oracle_mpsp, oracle_negative_cycle, oracle_phi, oracle_threshold, ApspOracle,
};
pub use workload::{
    apply, generate, random_graph, random_pairs, Op, UpdateKind, WeightRegime, Workload,
    WorkloadParams, MAX_WEIGHT,
};
