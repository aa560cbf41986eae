//! Fully dynamic detection of a cycle lighter than a fixed threshold `mu`
//! under vertex updates.
//!
//! Edges are split into a settled part `E0`, whose lightest cycle weighs at
//! least `mu`, and per-vertex pending sets `E1(v)`. Every nonempty pending
//! set is known to close a cycle below `mu`, so the answer is simply whether
//! any pending set is nonempty. Vertices with pending edges sit in a queue
//! ordered by their last insertion; deletions re-examine the front of the
//! queue until one pending set still closes a light cycle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, Edge, EdgeBatch, VertexId};
use crate::queue::RecencyQueue;
use crate::sssp::{min_cycle_with_insertion, PriceFunction};
use crate::weight::{ExtWeight, Weight};

/// Operation counters. `update_calls <= 2 * inserts + deletes` always holds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub inserts: u64,
    pub deletes: u64,
    pub update_calls: u64,
}

#[derive(Debug, Clone)]
pub struct ThresholdDetector {
    mu: Weight,
    g: DynamicDigraph,
    g0: DynamicDigraph,
    pending: Vec<BTreeMap<(VertexId, VertexId), Weight>>,
    queue: RecencyQueue,
    p0: PriceFunction,
    counters: Counters,
}

impl ThresholdDetector {
    pub fn new(n: usize, mu: Weight) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidThreshold(mu));
        }
        Ok(ThresholdDetector {
            mu,
            g: DynamicDigraph::new(n),
            g0: DynamicDigraph::new(n),
            pending: vec![BTreeMap::new(); n],
            queue: RecencyQueue::new(n),
            p0: PriceFunction::zeros(n),
            counters: Counters::default(),
        })
    }

    pub fn mu(&self) -> Weight {
        self.mu
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    /// The settled edges `E0`.
    pub fn settled(&self) -> &DynamicDigraph {
        &self.g0
    }

    pub fn prices(&self) -> &PriceFunction {
        &self.p0
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn pending(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.pending[v]
            .iter()
            .map(|(&(a, b), &w)| Edge::new(a, b, w))
    }

    /// Vertices with pending edges, least recently inserted first.
    pub fn queue_order(&self) -> Vec<VertexId> {
        self.queue.iter().collect()
    }

    /// True iff the graph has a cycle of weight below `mu`.
    pub fn cycle_below_threshold(&self) -> bool {
        !self.queue.is_empty()
    }

    /// Adds a batch of new edges centered at `v`. Edges already in the graph
    /// must be deleted first. An empty batch is a no-op.
    pub fn insert(&mut self, v: VertexId, f_v: &EdgeBatch) -> Result<()> {
        self.g.validate_centered(v, f_v)?;
        if f_v.is_empty() {
            return Ok(());
        }
        let f_v = f_v.collapsed();
        if let Some(e) = f_v.iter().find(|e| self.g.contains(e.u, e.v)) {
            return Err(Error::AlreadyPresent { u: e.u, v: e.v });
        }
        self.counters.inserts += 1;
        for e in &f_v {
            self.g.insert_edge(e.u, e.v, e.w)?;
            self.pending[v].insert((e.u, e.v), e.w);
        }
        self.queue.move_to_back(v);
        if self.queue.len() == 1 {
            self.update(v)?;
        }
        Ok(())
    }

    /// Removes a batch of edges, all of which must be present.
    pub fn delete(&mut self, f: &EdgeBatch) -> Result<()> {
        let mut pairs: Vec<(VertexId, VertexId)> = f.iter().map(|e| (e.u, e.v)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        for &(u, v) in &pairs {
            self.g.check_vertex(u)?;
            self.g.check_vertex(v)?;
            if !self.g.contains(u, v) {
                return Err(Error::NotPresent { u, v });
            }
        }
        if pairs.is_empty() {
            return Ok(());
        }
        self.counters.deletes += 1;
        for &(u, v) in &pairs {
            self.g.delete_edge(u, v)?;
            if self.g0.contains(u, v) {
                self.g0.delete_edge(u, v)?;
                continue;
            }
            let owner = if self.pending[u].contains_key(&(u, v)) {
                u
            } else {
                v
            };
            self.pending[owner].remove(&(u, v));
            if self.pending[owner].is_empty() {
                self.queue.remove(owner);
            }
        }
        while let Some(front) = self.queue.front() {
            self.update(front)?;
            if !self.pending[front].is_empty() {
                break;
            }
        }
        Ok(())
    }

    /// Replaces all edges incident to `v`.
    pub fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<()> {
        self.g.check_vertex(v)?;
        let mut batch = new_in.clone();
        batch.edges.extend_from_slice(&new_out.edges);
        self.g.validate_centered(v, &batch)?;
        if new_in.iter().any(|e| e.v != v) || new_out.iter().any(|e| e.u != v) {
            return Err(Error::InvalidBatch(format!(
                "edges of the update at {v} point the wrong way"
            )));
        }
        let old = self.g.incident_edges(v);
        self.delete(&old)?;
        self.insert(v, &batch)
    }

    /// Tries to settle the pending edges of `v`.
    fn update(&mut self, v: VertexId) -> Result<()> {
        self.counters.update_calls += 1;
        let f_v: EdgeBatch = self.pending(v).collect();
        let (x, p_new) = min_cycle_with_insertion(&self.g0, &self.p0, v, &f_v)?;
        if x >= ExtWeight::Finite(self.mu) {
            for e in &f_v {
                self.g0.insert_edge(e.u, e.v, e.w)?;
            }
            self.pending[v].clear();
            self.queue.remove(v);
            self.p0 = p_new.ok_or_else(|| {
                Error::InvariantViolation("non-negative cycle weight without prices".into())
            })?;
        }
        Ok(())
    }

    /// Full consistency scan: edge partition, queue membership and price
    /// feasibility on the settled edges.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let mut count = self.g0.m();
        for e in self.g0.edges() {
            if self.g.weight(e.u, e.v) != Some(e.w) {
                return Err(format!("settled edge {}->{} not in graph", e.u, e.v));
            }
        }
        for (v, set) in self.pending.iter().enumerate() {
            if set.is_empty() == self.queue.contains(v) {
                return Err(format!(
                    "queue membership of {v} disagrees with its pending set"
                ));
            }
            for (&(a, b), &w) in set {
                if a != v && b != v {
                    return Err(format!(
                        "pending edge {a}->{b} stored at unrelated vertex {v}"
                    ));
                }
                if self.g.weight(a, b) != Some(w) || self.g0.contains(a, b) {
                    return Err(format!("pending edge {a}->{b} is not exclusive"));
                }
                count += 1;
            }
        }
        if count != self.g.m() {
            return Err(format!("partition covers {count} of {} edges", self.g.m()));
        }
        if let Some((u, v, r)) = self.p0.violation(&self.g0) {
            return Err(format!("settled prices infeasible on {u}->{v} ({r})"));
        }
        Ok(())
    }
}
