//! Shortest-path primitives: Dijkstra under a price function, hop-limited
//! Bellman-Ford, static negative-cycle detection, and the two routines that
//! compute the lightest cycle through a vertex.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::ops::Index;

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, EdgeBatch, VertexId};
use crate::weight::{ExtWeight, Weight};

/// Slack allowed on reduced costs before prices count as infeasible.
pub const FEASIBILITY_EPS: f64 = 1e-9;

thread_local! {
    static DIJKSTRA_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of Dijkstra runs started on this thread so far.
pub fn dijkstra_calls() -> u64 {
    DIJKSTRA_CALLS.with(Cell::get)
}

pub(crate) fn count_dijkstra() {
    DIJKSTRA_CALLS.with(|c| c.set(c.get() + 1));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Distances from the source.
    Fwd,
    /// Distances to the source.
    Rev,
}

/// Per-vertex potentials `p` with `w(uv) + p(u) - p(v) >= 0` on every edge
/// when feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceFunction {
    values: Vec<Weight>,
}

impl PriceFunction {
    pub fn zeros(n: usize) -> Self {
        PriceFunction {
            values: vec![0.0; n],
        }
    }

    pub fn from_vec(values: Vec<Weight>) -> Self {
        PriceFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Weight] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<Weight> {
        self.values
    }

    pub fn set(&mut self, v: VertexId, x: Weight) {
        self.values[v] = x;
    }

    pub fn reduced_cost(&self, u: VertexId, v: VertexId, w: Weight) -> f64 {
        w + self.values[u] - self.values[v]
    }

    /// First edge (in edge order) with a negative reduced cost.
    pub fn violation(&self, g: &DynamicDigraph) -> Option<(VertexId, VertexId, f64)> {
        g.edges()
            .map(|e| (e.u, e.v, self.reduced_cost(e.u, e.v, e.w)))
            .find(|&(_, _, r)| r < -FEASIBILITY_EPS)
    }

    pub fn is_feasible(&self, g: &DynamicDigraph) -> bool {
        self.values.len() == g.n() && self.violation(g).is_none()
    }
}

impl Index<VertexId> for PriceFunction {
    type Output = Weight;

    fn index(&self, v: VertexId) -> &Weight {
        &self.values[v]
    }
}

/// Single-source distances in original units (`f64::INFINITY` when
/// unreachable) with a parent pointer per reached vertex. For reverse runs
/// the parent is the next vertex on the path toward the source.
#[derive(Debug, Clone, PartialEq)]
pub struct DistArray {
    pub source: VertexId,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<VertexId>>,
}

impl DistArray {
    pub fn get(&self, v: VertexId) -> ExtWeight {
        ExtWeight::from_f64(self.dist[v])
    }

    pub fn reached(&self, v: VertexId) -> bool {
        self.dist[v] < f64::INFINITY
    }

    /// Vertices on the parent chain from `v` back to the source, starting at `v`.
    pub fn chain(&self, v: VertexId) -> Option<Vec<VertexId>> {
        if !self.reached(v) {
            return None;
        }
        let mut out = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            out.push(p);
            x = p;
        }
        Some(out)
    }
}

/// Min-heap entry ordered by key, then by smallest vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HeapEntry {
    pub key: f64,
    pub v: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks a reduced cost and clamps rounding noise to zero.
pub(crate) fn checked_reduced(u: VertexId, v: VertexId, reduced: f64) -> Result<f64> {
    if reduced < -FEASIBILITY_EPS {
        Err(Error::InfeasiblePrices { u, v, reduced })
    } else {
        Ok(reduced.max(0.0))
    }
}

/// Dijkstra on reduced costs. `arcs(x, buf)` fills `buf` with
/// `(y, w, reduced)` for every arc leaving `x` in search direction; `w` is
/// accumulated into the returned distances.
pub(crate) fn run_dijkstra<A>(n: usize, source: VertexId, mut arcs: A) -> Result<DistArray>
where
    A: FnMut(VertexId, &mut Vec<(VertexId, Weight, f64)>),
{
    count_dijkstra();
    let mut dist = vec![f64::INFINITY; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut buf = Vec::new();
    dist[source] = 0.0;
    key[source] = 0.0;
    heap.push(HeapEntry {
        key: 0.0,
        v: source,
    });
    while let Some(HeapEntry { key: k, v: x }) = heap.pop() {
        if done[x] || k > key[x] {
            continue;
        }
        done[x] = true;
        buf.clear();
        arcs(x, &mut buf);
        for &(y, w, reduced) in &buf {
            let r = checked_reduced(x, y, reduced)?;
            if done[y] {
                continue;
            }
            let nk = k + r;
            if nk < key[y] || (nk == key[y] && parent[y].is_some_and(|p| x < p)) {
                key[y] = nk;
                dist[y] = dist[x] + w;
                parent[y] = Some(x);
                heap.push(HeapEntry { key: nk, v: y });
            }
        }
    }
    Ok(DistArray {
        source,
        dist,
        parent,
    })
}

/// Dijkstra from (`Fwd`) or to (`Rev`) `source` under prices `p`, optionally
/// restricted to vertices with `allowed[v] == true`.
pub fn dijkstra(
    g: &DynamicDigraph,
    source: VertexId,
    p: &PriceFunction,
    direction: Direction,
    allowed: Option<&[bool]>,
) -> Result<DistArray> {
    g.check_vertex(source)?;
    let ok = |x: VertexId| allowed.is_none_or(|a| a[x]);
    let pv = p.values();
    match direction {
        Direction::Fwd => run_dijkstra(g.n(), source, |x, buf| {
            for (y, w) in g.out_edges(x) {
                if ok(y) {
                    buf.push((y, w, w + pv[x] - pv[y]));
                }
            }
        }),
        Direction::Rev => run_dijkstra(g.n(), source, |x, buf| {
            for (y, w) in g.in_edges(x) {
                if ok(y) {
                    buf.push((y, w, w + pv[y] - pv[x]));
                }
            }
        }),
    }
}

/// Dijkstra over explicit adjacency lists `adj[x] = [(y, w), ...]`.
pub fn dijkstra_lists(
    adj: &[Vec<(VertexId, Weight)>],
    source: VertexId,
    p: &[Weight],
) -> Result<DistArray> {
    run_dijkstra(adj.len(), source, |x, buf| {
        buf.extend(adj[x].iter().map(|&(y, w)| (y, w, w + p[x] - p[y])));
    })
}

/// Weight of the lightest cycle through `v` in a graph without negative edges.
pub fn min_cycle_through_vertex(h: &DynamicDigraph, v: VertexId) -> Result<ExtWeight> {
    h.check_vertex(v)?;
    if let Some(e) = h.has_negative_edge() {
        return Err(Error::NegativeWeight { u: e.u, v: e.v });
    }
    let d = dijkstra(h, v, &PriceFunction::zeros(h.n()), Direction::Fwd, None)?;
    let best = h
        .in_edges(v)
        .map(|(u, w)| d.dist[u] + w)
        .fold(f64::INFINITY, f64::min);
    Ok(ExtWeight::from_f64(best))
}

/// Lightest cycle through `v` in `H + F` where `p` is feasible on `H` and
/// `f_v` is centered at `v`.
///
/// When the returned weight is non-negative, the second component is a
/// price function feasible on `H + F`.
pub fn min_cycle_with_insertion(
    h: &DynamicDigraph,
    p: &PriceFunction,
    v: VertexId,
    f_v: &EdgeBatch,
) -> Result<(ExtWeight, Option<PriceFunction>)> {
    h.validate_centered(v, f_v)?;
    if p.len() != h.n() {
        return Err(Error::InvalidConfig(format!(
            "price function has {} entries, graph has {} vertices",
            p.len(),
            h.n()
        )));
    }
    let n = h.n();

    // Edges into v (the removed set) and out of v, both over H + F.
    let mut into_v: BTreeMap<VertexId, Weight> = h.in_edges(v).collect();
    let mut out_v: BTreeMap<VertexId, Weight> = h.out_edges(v).filter(|&(z, _)| z != v).collect();
    for e in f_v {
        if e.v == v {
            let slot = into_v.entry(e.u).or_insert(e.w);
            *slot = slot.min(e.w);
        } else {
            let slot = out_v.entry(e.v).or_insert(e.w);
            *slot = slot.min(e.w);
        }
    }
    let out_v: Vec<(VertexId, Weight)> = out_v.into_iter().collect();

    let mut pv = p.values().to_vec();
    for &(z, w) in &out_v {
        pv[v] = pv[v].max(p[z] - w);
    }

    let d = run_dijkstra(n, v, |x, buf| {
        if x == v {
            buf.extend(out_v.iter().map(|&(y, w)| (y, w, w + pv[x] - pv[y])));
        } else {
            for (y, w) in h.out_edges(x) {
                if y != v {
                    buf.push((y, w, w + pv[x] - pv[y]));
                }
            }
        }
    })?;

    let x = into_v
        .iter()
        .map(|(&u, &w)| d.dist[u] + w)
        .fold(f64::INFINITY, f64::min);
    if x < 0.0 {
        return Ok((ExtWeight::from_f64(x), None));
    }

    // Crossing edges from unreached vertices into the reached set, over H + F.
    let mut m = 0.0f64;
    for z in (0..n).filter(|&z| !d.reached(z)) {
        for (y, w) in h.out_edges(z) {
            if d.reached(y) {
                let w = if y == v { into_v[&z] } else { w };
                m = m.max(d.dist[y] - p[z] - w);
            }
        }
        if let Some(&w) = into_v.get(&z) {
            m = m.max(-p[z] - w);
        }
    }
    let values = (0..n)
        .map(|z| if d.reached(z) { d.dist[z] } else { p[z] + m })
        .collect();
    Ok((
        ExtWeight::from_f64(x),
        Some(PriceFunction::from_vec(values)),
    ))
}

/// Hop-limited distances from or to a source with some vertices deleted,
/// plus one witnessing path per reached vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct HopDistTable {
    pub source: VertexId,
    pub direction: Direction,
    pub dist: Vec<f64>,
    path_start: Vec<usize>,
    path_len: Vec<usize>,
    path_data: Vec<VertexId>,
}

impl HopDistTable {
    pub fn get(&self, v: VertexId) -> ExtWeight {
        ExtWeight::from_f64(self.dist[v])
    }

    /// The stored path in edge order: source to `v` for `Fwd`, `v` to
    /// source for `Rev`.
    pub fn path(&self, v: VertexId) -> Option<&[VertexId]> {
        if self.dist[v] == f64::INFINITY {
            None
        } else {
            let s = self.path_start[v];
            Some(&self.path_data[s..s + self.path_len[v]])
        }
    }
}

/// Exact `<= hops`-edge distances from (`Fwd`) or to (`Rev`) `source` in `g`
/// minus the `forbidden` vertices. The source itself is never deleted.
/// Negative edges are fine; the hop bound keeps relaxation finite.
pub fn bellman_ford_hops(
    g: &DynamicDigraph,
    source: VertexId,
    hops: usize,
    forbidden: &[bool],
    direction: Direction,
) -> HopDistTable {
    let n = g.n();
    let mut cur = vec![f64::INFINITY; n];
    cur[source] = 0.0;
    // pred[k][v]: vertex before v on the best path with at most k+1 hops,
    // or None when that path has at most k hops.
    let mut pred: Vec<Vec<Option<VertexId>>> = Vec::new();
    let mut active = vec![source];
    let mut in_next = vec![false; n];
    for _ in 0..hops {
        if active.is_empty() {
            break;
        }
        let mut next = cur.clone();
        let mut layer = vec![None; n];
        let mut touched = Vec::new();
        for &x in &active {
            let edges: Box<dyn Iterator<Item = (VertexId, Weight)>> = match direction {
                Direction::Fwd => Box::new(g.out_edges(x)),
                Direction::Rev => Box::new(g.in_edges(x)),
            };
            for (y, w) in edges {
                if y == source || forbidden[y] {
                    continue;
                }
                let cand = cur[x] + w;
                if cand < next[y] || (cand == next[y] && layer[y].is_some_and(|p| x < p)) {
                    next[y] = cand;
                    layer[y] = Some(x);
                    if !in_next[y] {
                        in_next[y] = true;
                        touched.push(y);
                    }
                }
            }
        }
        for &y in &touched {
            in_next[y] = false;
        }
        touched.sort_unstable();
        active = touched;
        cur = next;
        pred.push(layer);
    }

    let mut path_start = vec![0; n];
    let mut path_len = vec![0; n];
    let mut path_data = Vec::new();
    let mut walk = Vec::new();
    for v in 0..n {
        if cur[v] == f64::INFINITY {
            continue;
        }
        walk.clear();
        let mut x = v;
        let mut k = pred.len();
        walk.push(x);
        while x != source {
            k -= 1;
            if let Some(p) = pred[k][x] {
                x = p;
                walk.push(x);
            }
        }
        if direction == Direction::Fwd {
            walk.reverse();
        }
        path_start[v] = path_data.len();
        path_len[v] = walk.len();
        path_data.extend_from_slice(&walk);
    }
    HopDistTable {
        source,
        direction,
        dist: cur,
        path_start,
        path_len,
        path_data,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StaticCycleCheck {
    Feasible(PriceFunction),
    NegativeCycle,
}

/// Bellman-Ford from a virtual source joined to every vertex by a zero edge.
pub fn static_negative_cycle(g: &DynamicDigraph) -> StaticCycleCheck {
    let n = g.n();
    let mut d = vec![0.0f64; n];
    let edges: Vec<_> = g.edges().collect();
    for _ in 0..=n {
        let mut changed = false;
        for e in &edges {
            let cand = d[e.u] + e.w;
            if cand < d[e.v] {
                d[e.v] = cand;
                changed = true;
            }
        }
        if !changed {
            return StaticCycleCheck::Feasible(PriceFunction::from_vec(d));
        }
    }
    StaticCycleCheck::NegativeCycle
}
