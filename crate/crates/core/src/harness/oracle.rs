use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::graph::{DynamicDigraph, VertexId};
use crate::mpsp_batch::MpspAnswer;
use crate::weight::ExtWeight;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// All-pairs distances of `g` with the `removed` vertices deleted, or
/// `NegativeCycle` when what remains has one.
#[derive(Debug, Clone, PartialEq)]
pub enum ApspOracle {
    NegativeCycle,
    /// `dist[s][t]`, `f64::INFINITY` when unreachable or when `s` or `t` is removed.
    Distances(Vec<Vec<f64>>),
}

fn live_edges(g: &DynamicDigraph, removed: &[bool]) -> Vec<(usize, usize, f64)> {
    g.edges()
        .filter(|e| !removed[e.u] && !removed[e.v])
        .map(|e| (e.u, e.v, e.w))
        .collect()
}

/// Bellman-Ford from a virtual source; `None` on a negative cycle.
fn potentials(n: usize, edges: &[(usize, usize, f64)]) -> Option<Vec<f64>> {
    let mut h = vec![0.0f64; n];
    for _ in 0..=n {
        let mut changed = false;
        for &(u, v, w) in edges {
            if h[u] + w < h[v] {
                h[v] = h[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Some(h);
        }
    }
    None
}

fn reweighted_dijkstra(adj: &[Vec<(usize, f64)>], h: &[f64], s: usize) -> Vec<f64> {
    let n = adj.len();
    let mut d = vec![f64::INFINITY; n];
    let mut heap = BinaryHeap::new();
    d[s] = 0.0;
    heap.push(Reverse((Key(0.0), s)));
    while let Some(Reverse((Key(k), x))) = heap.pop() {
        if k > d[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nk = k + (w + h[x] - h[y]).max(0.0);
            if nk < d[y] {
                d[y] = nk;
                heap.push(Reverse((Key(nk), y)));
            }
        }
    }
    // back to original units
    for (t, dt) in d.iter_mut().enumerate() {
        if *dt < f64::INFINITY {
            *dt = *dt - h[s] + h[t];
        }
    }
    d
}

fn johnson_rows(
    g: &DynamicDigraph,
    removed: &[bool],
    sources: impl Iterator<Item = VertexId>,
) -> Option<Vec<Option<Vec<f64>>>> {
    let n = g.n();
    let edges = live_edges(g, removed);
    let h = potentials(n, &edges)?;
    let mut adj = vec![Vec::new(); n];
    for &(u, v, w) in &edges {
        adj[u].push((v, w));
    }
    let mut rows = vec![None; n];
    for s in sources {
        if !removed[s] && rows[s].is_none() {
            rows[s] = Some(reweighted_dijkstra(&adj, &h, s));
        }
    }
    Some(rows)
}

pub fn oracle_apsp(g: &DynamicDigraph, removed: &[VertexId]) -> ApspOracle {
    let n = g.n();
    let mut mask = vec![false; n];
    for &v in removed {
        mask[v] = true;
    }
    match johnson_rows(g, &mask, 0..n) {
        None => ApspOracle::NegativeCycle,
        Some(rows) => ApspOracle::Distances(
            rows.into_iter()
                .map(|r| r.unwrap_or_else(|| vec![f64::INFINITY; n]))
                .collect(),
        ),
    }
}

pub fn oracle_negative_cycle(g: &DynamicDigraph) -> bool {
    potentials(g.n(), &live_edges(g, &vec![false; g.n()])).is_none()
}

/// Minimum cycle weight: `-inf` with a negative cycle, `+inf` when acyclic.
pub fn oracle_phi(g: &DynamicDigraph) -> ExtWeight {
    let n = g.n();
    let none = vec![false; n];
    let heads: Vec<VertexId> = g.edges().map(|e| e.v).collect();
    let Some(rows) = johnson_rows(g, &none, heads.into_iter()) else {
        return ExtWeight::NegInf;
    };
    let best = g
        .edges()
        .map(|e| rows[e.v].as_ref().expect("row for every head")[e.u] + e.w)
        .fold(f64::INFINITY, f64::min);
    ExtWeight::from_f64(best)
}

pub fn oracle_threshold(g: &DynamicDigraph, mu: f64) -> bool {
    oracle_phi(g) < ExtWeight::Finite(mu)
}

/// Pair distances in `g` minus `removed`; pairs touching a removed vertex
/// are `+inf`.
pub fn oracle_mpsp(
    g: &DynamicDigraph,
    removed: &[VertexId],
    pairs: &[(VertexId, VertexId)],
) -> MpspAnswer {
    let n = g.n();
    let mut mask = vec![false; n];
    for &v in removed {
        mask[v] = true;
    }
    let Some(rows) = johnson_rows(g, &mask, pairs.iter().map(|&(s, _)| s)) else {
        return MpspAnswer::NegativeCycle;
    };
    MpspAnswer::Distances(
        pairs
            .iter()
            .map(|&(s, t)| match &rows[s] {
                Some(r) if !mask[t] => ExtWeight::from_f64(r[t]),
                _ => ExtWeight::PosInf,
            })
            .collect(),
    )
}
