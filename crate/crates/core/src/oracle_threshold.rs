//! Threshold cycle detection under single-edge updates, on top of any fully
//! dynamic exact distance oracle.
//!
//! The oracle holds the settled edges `E0`, whose lightest cycle weighs at
//! least `mu`. New edges wait in an insertion-ordered pending list. An edge
//! `xy` moves into the oracle once `dist(y, x) + w(xy) >= mu`, so the answer
//! is whether anything is still pending.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, VertexId};
use crate::sssp::{dijkstra, Direction, PriceFunction};
use crate::weight::{ExtWeight, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    Accepted,
    /// The edge would close a negative cycle; the oracle is unchanged.
    RefusedNegativeCycle,
}

/// Exact distances on a graph kept free of negative cycles.
pub trait DynamicDistanceOracle {
    fn n(&self) -> usize;
    /// Fails with `AlreadyPresent` if the edge exists.
    fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<Insertion>;
    fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<Weight>;
    fn distance(&self, s: VertexId, t: VertexId) -> Result<ExtWeight>;
}

/// Dijkstra per query under a maintained feasible price function.
#[derive(Debug, Clone)]
pub struct NaiveOracle {
    g: DynamicDigraph,
    p: PriceFunction,
}

impl NaiveOracle {
    pub fn new(n: usize) -> Self {
        NaiveOracle {
            g: DynamicDigraph::new(n),
            p: PriceFunction::zeros(n),
        }
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn prices(&self) -> &PriceFunction {
        &self.p
    }
}

impl DynamicDistanceOracle for NaiveOracle {
    fn n(&self) -> usize {
        self.g.n()
    }

    fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<Insertion> {
        self.g.check_vertex(u)?;
        self.g.check_vertex(v)?;
        if !w.is_finite() {
            return Err(Error::InvalidWeight(w));
        }
        if self.g.contains(u, v) {
            return Err(Error::AlreadyPresent { u, v });
        }
        let from_v = dijkstra(&self.g, v, &self.p, Direction::Fwd, None)?;
        if from_v.dist[u] + w < 0.0 {
            return Ok(Insertion::RefusedNegativeCycle);
        }
        let base = self.p[u] + w;
        let values: Vec<Weight> = (0..self.g.n())
            .map(|x| self.p[x].min(base + from_v.dist[x]))
            .collect();
        self.p = PriceFunction::from_vec(values);
        self.g.insert_edge(u, v, w)?;
        if let Some((a, b, r)) = self.p.violation(&self.g) {
            return Err(Error::InfeasiblePrices {
                u: a,
                v: b,
                reduced: r,
            });
        }
        Ok(Insertion::Accepted)
    }

    fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<Weight> {
        self.g.delete_edge(u, v)
    }

    fn distance(&self, s: VertexId, t: VertexId) -> Result<ExtWeight> {
        self.g.check_vertex(t)?;
        Ok(dijkstra(&self.g, s, &self.p, Direction::Fwd, None)?.get(t))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeCounters {
    pub inserts: u64,
    pub deletes: u64,
    pub update_calls: u64,
    pub oracle_inserts: u64,
    pub oracle_deletes: u64,
    pub oracle_queries: u64,
}

impl EdgeCounters {
    pub fn oracle_calls(&self) -> u64 {
        self.oracle_inserts + self.oracle_deletes + self.oracle_queries
    }
}

#[derive(Debug, Clone)]
pub struct EdgeThresholdDetector<O = NaiveOracle> {
    mu: Weight,
    g: DynamicDigraph,
    g0: DynamicDigraph,
    oracle: O,
    /// Pending edges by insertion stamp, and the stamp of each pending edge.
    queue: BTreeMap<u64, (VertexId, VertexId)>,
    stamp: BTreeMap<(VertexId, VertexId), u64>,
    next_stamp: u64,
    counters: EdgeCounters,
}

impl EdgeThresholdDetector<NaiveOracle> {
    pub fn new(n: usize, mu: Weight) -> Result<Self> {
        Self::with_oracle(NaiveOracle::new(n), mu)
    }
}

impl<O: DynamicDistanceOracle> EdgeThresholdDetector<O> {
    /// `oracle` must start empty.
    pub fn with_oracle(oracle: O, mu: Weight) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidThreshold(mu));
        }
        let n = oracle.n();
        Ok(EdgeThresholdDetector {
            mu,
            g: DynamicDigraph::new(n),
            g0: DynamicDigraph::new(n),
            oracle,
            queue: BTreeMap::new(),
            stamp: BTreeMap::new(),
            next_stamp: 0,
            counters: EdgeCounters::default(),
        })
    }

    pub fn mu(&self) -> Weight {
        self.mu
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    /// Edges held by the oracle.
    pub fn settled(&self) -> &DynamicDigraph {
        &self.g0
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn counters(&self) -> EdgeCounters {
        self.counters
    }

    /// Pending edges, oldest first.
    pub fn pending(&self) -> Vec<(VertexId, VertexId)> {
        self.queue.values().copied().collect()
    }

    pub fn cycle_below_threshold(&self) -> bool {
        !self.queue.is_empty()
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<()> {
        self.g.check_vertex(u)?;
        self.g.check_vertex(v)?;
        if self.g.contains(u, v) {
            return Err(Error::AlreadyPresent { u, v });
        }
        self.g.insert_edge(u, v, w)?;
        self.counters.inserts += 1;
        let s = self.next_stamp;
        self.next_stamp += 1;
        self.queue.insert(s, (u, v));
        self.stamp.insert((u, v), s);
        if self.queue.len() == 1 {
            self.update(u, v)?;
        }
        Ok(())
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.g.delete_edge(u, v)?;
        self.counters.deletes += 1;
        if let Some(s) = self.stamp.remove(&(u, v)) {
            self.queue.remove(&s);
        } else {
            self.g0.delete_edge(u, v)?;
            self.counters.oracle_deletes += 1;
            self.oracle.delete_edge(u, v)?;
        }
        while let Some((_, &(x, y))) = self.queue.first_key_value() {
            if !self.update(x, y)? {
                break;
            }
        }
        Ok(())
    }

    /// Tries to settle pending edge `xy`; true if it moved.
    fn update(&mut self, x: VertexId, y: VertexId) -> Result<bool> {
        self.counters.update_calls += 1;
        let w = self.g.weight(x, y).expect("pending edge is in the graph");
        self.counters.oracle_queries += 1;
        let back = self.oracle.distance(y, x)?;
        if back + ExtWeight::Finite(w) < ExtWeight::Finite(self.mu) {
            return Ok(false);
        }
        self.counters.oracle_inserts += 1;
        if self.oracle.insert_edge(x, y, w)? == Insertion::RefusedNegativeCycle {
            return Err(Error::InvariantViolation(format!(
                "oracle refused {x}->{y} although it closes no cycle below {}",
                self.mu
            )));
        }
        self.g0.insert_edge(x, y, w)?;
        let s = self
            .stamp
            .remove(&(x, y))
            .expect("pending edge has a stamp");
        self.queue.remove(&s);
        Ok(true)
    }

    /// Full consistency scan: pending and settled edges partition the graph.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        if self.queue.len() != self.stamp.len() {
            return Err("queue and stamp index differ in size".into());
        }
        for (&s, &(u, v)) in &self.queue {
            if self.stamp.get(&(u, v)) != Some(&s) {
                return Err(format!("stamp of {u}->{v} disagrees with the queue"));
            }
            if !self.g.contains(u, v) || self.g0.contains(u, v) {
                return Err(format!("pending edge {u}->{v} is not exclusive"));
            }
        }
        for e in self.g0.edges() {
            if self.g.weight(e.u, e.v) != Some(e.w) {
                return Err(format!("settled edge {}->{} not in graph", e.u, e.v));
            }
        }
        if self.g0.m() + self.queue.len() != self.g.m() {
            return Err("settled and pending edges do not cover the graph".into());
        }
        Ok(())
    }
}
