//! Shared helpers for the integration suites: replay drivers and
//! brute-force cycle enumeration.

#![allow(dead_code)]

use dyncycle_core::graph::centered_batch;
use dyncycle_core::harness::{Op, Workload};
use dyncycle_core::{DynamicDigraph, Edge, EdgeBatch, VertexId};

pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> DynamicDigraph {
    DynamicDigraph::from_edges(n, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w))).unwrap()
}

/// Splits a vertex-update op into its incoming and outgoing batches.
pub fn split_update(op: &Op) -> Option<(VertexId, EdgeBatch, EdgeBatch)> {
    match op {
        Op::VertexUpdate {
            v,
            incoming,
            outgoing,
        } => Some((
            *v,
            centered_batch(*v, incoming, &[]),
            centered_batch(*v, &[], outgoing),
        )),
        _ => None,
    }
}

/// Replays the updates of `w` on a shadow graph, calling `step` after each
/// update with the current graph.
pub fn for_each_update(w: &Workload, mut step: impl FnMut(&Op, &DynamicDigraph)) {
    let mut g = DynamicDigraph::new(w.n);
    for op in &w.ops {
        if op.is_update() {
            dyncycle_core::harness::apply(&mut g, op);
            step(op, &g);
        }
    }
}

/// Lightest simple cycle through `v` by exhaustive DFS. `None` when no
/// cycle passes through `v`.
pub fn dfs_min_cycle_through(g: &DynamicDigraph, v: VertexId) -> Option<f64> {
    fn go(
        g: &DynamicDigraph,
        start: VertexId,
        x: VertexId,
        len: f64,
        seen: &mut Vec<bool>,
        best: &mut Option<f64>,
    ) {
        for (y, w) in g.out_edges(x) {
            if y == start {
                let c = len + w;
                if best.is_none_or(|b| c < b) {
                    *best = Some(c);
                }
            } else if !seen[y] {
                seen[y] = true;
                go(g, start, y, len + w, seen, best);
                seen[y] = false;
            }
        }
    }
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut best = None;
    go(g, v, v, 0.0, &mut seen, &mut best);
    best
}

/// Lightest simple cycle anywhere; `None` when acyclic.
pub fn dfs_min_cycle(g: &DynamicDigraph) -> Option<f64> {
    (0..g.n())
        .filter_map(|v| dfs_min_cycle_through(g, v))
        .reduce(f64::min)
}

/// Random `(H, p, v, F_v)` with `p` feasible on `H`, negative weights
/// allowed, and `F_v` centered at `v` on pairs absent from `H`.
pub fn random_priced_instance(
    rng: &mut impl rand::Rng,
    n: usize,
) -> (
    DynamicDigraph,
    dyncycle_core::PriceFunction,
    VertexId,
    EdgeBatch,
) {
    let p: Vec<f64> = (0..n).map(|_| rng.gen_range(-20..=20) as f64).collect();
    let mut h = DynamicDigraph::new(n);
    let density = rng.gen_range(0.05..0.5);
    for u in 0..n {
        for z in 0..n {
            if rng.gen_bool(density) {
                let slack = rng.gen_range(0..=10) as f64;
                h.insert_edge(u, z, p[z] - p[u] + slack).unwrap();
            }
        }
    }
    let v = rng.gen_range(0..n);
    let mut f = EdgeBatch::new();
    for x in 0..n {
        if !h.contains(x, v) && rng.gen_bool(0.3) {
            f.push(x, v, rng.gen_range(-15..=25) as f64);
        }
        if x != v && !h.contains(v, x) && rng.gen_bool(0.3) {
            f.push(v, x, rng.gen_range(-15..=25) as f64);
        }
    }
    (h, dyncycle_core::PriceFunction::from_vec(p), v, f)
}
