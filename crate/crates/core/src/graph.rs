//! Dynamic weighted digraph on a fixed vertex set, plus the source/target
//! pair set shared by the shortest-path structures.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::weight::Weight;

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub w: Weight,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, w: Weight) -> Self {
        Edge { u, v, w }
    }
}

/// A list of edges; for vertex updates every edge touches the center vertex.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeBatch {
    pub edges: Vec<Edge>,
}

impl EdgeBatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: Vec<Edge>) -> Self {
        EdgeBatch { edges }
    }

    pub fn push(&mut self, u: VertexId, v: VertexId, w: Weight) {
        self.edges.push(Edge::new(u, v, w));
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }

    pub fn is_centered_at(&self, v: VertexId) -> bool {
        self.edges.iter().all(|e| e.u == v || e.v == v)
    }

    /// Collapses repeated ordered pairs to their minimum weight, keeping
    /// first-occurrence order.
    pub fn collapsed(&self) -> EdgeBatch {
        let mut pos: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
        let mut out: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            match pos.get(&(e.u, e.v)) {
                Some(&i) => out[i].w = out[i].w.min(e.w),
                None => {
                    pos.insert((e.u, e.v), out.len());
                    out.push(*e);
                }
            }
        }
        EdgeBatch { edges: out }
    }
}

impl FromIterator<Edge> for EdgeBatch {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeBatch {
            edges: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a EdgeBatch {
    type Item = &'a Edge;
    type IntoIter = std::slice::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}

/// Builds the batch for a vertex update from `(source, w)` incoming and
/// `(target, w)` outgoing lists.
pub fn centered_batch(
    v: VertexId,
    incoming: &[(VertexId, Weight)],
    outgoing: &[(VertexId, Weight)],
) -> EdgeBatch {
    incoming
        .iter()
        .map(|&(u, w)| Edge::new(u, v, w))
        .chain(outgoing.iter().map(|&(z, w)| Edge::new(v, z, w)))
        .collect()
}

/// Simple weighted digraph. Parallel insertions collapse to the minimum
/// weight; self-loops are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicDigraph {
    n: usize,
    out_adj: Vec<BTreeMap<VertexId, Weight>>,
    in_adj: Vec<BTreeMap<VertexId, Weight>>,
    m: usize,
}

impl DynamicDigraph {
    pub fn new(n: usize) -> Self {
        DynamicDigraph {
            n,
            out_adj: vec![BTreeMap::new(); n],
            in_adj: vec![BTreeMap::new(); n],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = DynamicDigraph::new(n);
        for e in edges {
            g.insert_edge(e.u, e.v, e.w)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::InvalidVertex { v, n: self.n })
        }
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<Weight> {
        self.out_adj.get(u)?.get(&v).copied()
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.weight(u, v).is_some()
    }

    pub fn out_edges(&self, u: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.out_adj[u].iter().map(|(&v, &w)| (v, w))
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Weight)> + '_ {
        self.in_adj[v].iter().map(|(&u, &w)| (u, w))
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v].len()
    }

    /// In-degree plus out-degree; a self-loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    /// All edges in `(u, v)` lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().map(move |(&v, &w)| Edge::new(u, v, w)))
    }

    pub fn has_negative_edge(&self) -> Option<Edge> {
        self.edges().find(|e| e.w < 0.0)
    }

    /// Inserts `u -> v`; an existing edge keeps the smaller weight.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !w.is_finite() {
            return Err(Error::InvalidWeight(w));
        }
        match self.out_adj[u].get_mut(&v) {
            Some(old) => {
                if w < *old {
                    *old = w;
                    self.in_adj[v].insert(u, w);
                }
            }
            None => {
                self.out_adj[u].insert(v, w);
                self.in_adj[v].insert(u, w);
                self.m += 1;
            }
        }
        Ok(())
    }

    /// Removes `u -> v` and returns its weight.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<Weight> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        match self.out_adj[u].remove(&v) {
            Some(w) => {
                self.in_adj[v].remove(&u);
                self.m -= 1;
                Ok(w)
            }
            None => Err(Error::NotPresent { u, v }),
        }
    }

    /// Every edge incident to `v`: outgoing edges first, then incoming ones
    /// (a self-loop is listed once, among the outgoing edges).
    pub fn incident_edges(&self, v: VertexId) -> EdgeBatch {
        let mut batch: EdgeBatch = self.out_edges(v).map(|(z, w)| Edge::new(v, z, w)).collect();
        batch.edges.extend(
            self.in_edges(v)
                .filter(|&(u, _)| u != v)
                .map(|(u, w)| Edge::new(u, v, w)),
        );
        batch
    }

    /// Checks that a batch is a valid vertex update centered at `v`.
    pub fn validate_centered(&self, v: VertexId, batch: &EdgeBatch) -> Result<()> {
        self.check_vertex(v)?;
        for e in batch {
            self.check_vertex(e.u)?;
            self.check_vertex(e.v)?;
            if !e.w.is_finite() {
                return Err(Error::InvalidWeight(e.w));
            }
            if e.u != v && e.v != v {
                return Err(Error::InvalidBatch(format!(
                    "edge {}->{} is not incident to center {v}",
                    e.u, e.v
                )));
            }
        }
        Ok(())
    }

    /// Replaces every edge incident to `v` by `new_in` (edges ending at `v`)
    /// and `new_out` (edges starting at `v`). Returns the removed edges.
    pub fn apply_vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<EdgeBatch> {
        self.check_vertex(v)?;
        for e in new_in {
            self.check_vertex(e.u)?;
            if e.v != v {
                return Err(Error::InvalidBatch(format!(
                    "incoming edge {}->{} does not end at {v}",
                    e.u, e.v
                )));
            }
        }
        for e in new_out {
            self.check_vertex(e.v)?;
            if e.u != v {
                return Err(Error::InvalidBatch(format!(
                    "outgoing edge {}->{} does not start at {v}",
                    e.u, e.v
                )));
            }
        }
        if let Some(e) = new_in.iter().chain(new_out).find(|e| !e.w.is_finite()) {
            return Err(Error::InvalidWeight(e.w));
        }
        let removed = self.clear_vertex(v);
        for e in new_in.iter().chain(new_out) {
            self.insert_edge(e.u, e.v, e.w)?;
        }
        Ok(removed)
    }

    /// Same as [`apply_vertex_update`](Self::apply_vertex_update) with a
    /// single mixed batch.
    pub fn replace_incident(&mut self, v: VertexId, batch: &EdgeBatch) -> Result<EdgeBatch> {
        self.validate_centered(v, batch)?;
        let removed = self.clear_vertex(v);
        for e in batch {
            self.insert_edge(e.u, e.v, e.w)?;
        }
        Ok(removed)
    }

    /// Removes and returns all edges incident to `v`.
    pub fn clear_vertex(&mut self, v: VertexId) -> EdgeBatch {
        let removed = self.incident_edges(v);
        for e in &removed {
            self.out_adj[e.u].remove(&e.v);
            self.in_adj[e.v].remove(&e.u);
        }
        self.m -= removed.len();
        removed
    }

    /// `G \ D`: the same vertex set with every edge touching `removed` dropped.
    pub fn without_vertices(&self, removed: &[bool]) -> DynamicDigraph {
        let mut g = DynamicDigraph::new(self.n);
        for e in self.edges() {
            if !removed[e.u] && !removed[e.v] {
                g.out_adj[e.u].insert(e.v, e.w);
                g.in_adj[e.v].insert(e.u, e.w);
                g.m += 1;
            }
        }
        g
    }

    /// The graph with every edge reversed.
    pub fn reversed(&self) -> DynamicDigraph {
        DynamicDigraph {
            n: self.n,
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            m: self.m,
        }
    }

    /// Full scan of the adjacency mirror and edge count.
    pub fn is_consistent(&self) -> bool {
        let mut count = 0;
        for u in 0..self.n {
            for (&v, &w) in &self.out_adj[u] {
                if self.in_adj[v].get(&u) != Some(&w) {
                    return false;
                }
                count += 1;
            }
        }
        let in_count: usize = self.in_adj.iter().map(BTreeMap::len).sum();
        count == self.m && in_count == self.m
    }
}

/// Source/target pairs together with the undirected pair graph used for
/// congestion accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pairs: Vec<(VertexId, VertexId)>,
    neighbors: Vec<BTreeSet<VertexId>>,
    by_source: Vec<Vec<usize>>,
    by_target: Vec<Vec<usize>>,
}

impl PairSet {
    pub fn new(n: usize, pairs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut neighbors = vec![BTreeSet::new(); n];
        let mut by_source = vec![Vec::new(); n];
        let mut by_target = vec![Vec::new(); n];
        for (l, &(s, t)) in pairs.iter().enumerate() {
            for x in [s, t] {
                if x >= n {
                    return Err(Error::InvalidVertex { v: x, n });
                }
            }
            neighbors[s].insert(t);
            neighbors[t].insert(s);
            by_source[s].push(l);
            by_target[t].push(l);
        }
        Ok(PairSet {
            pairs,
            neighbors,
            by_source,
            by_target,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(VertexId, VertexId)] {
        &self.pairs
    }

    pub fn get(&self, l: usize) -> (VertexId, VertexId) {
        self.pairs[l]
    }

    /// Degree of `v` in the pair graph; repeated pairs count once.
    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.neighbors[v].iter().copied()
    }

    /// Indices of pairs with source `s`.
    pub fn with_source(&self, s: VertexId) -> &[usize] {
        &self.by_source[s]
    }

    /// Indices of pairs with target `t`.
    pub fn with_target(&self, t: VertexId) -> &[usize] {
        &self.by_target[t]
    }
}
