//! Negative-cycle detection with a worst-case bound per vertex update,
//! via a minimum-cost unit-capacity circulation.
//!
//! Every vertex `v` is split into `in(v) -> out(v)` (cost 0, capacity 1) and
//! every edge `uv` becomes `out(u) -> in(v)` with cost `w(uv)`. A minimum-cost
//! circulation on the split graph is a set of vertex-disjoint cycles; it is
//! negative iff the graph has a negative cycle. Optimality is certified by a
//! potential `q` with `c(e) + q(x) - q(y) >= 0` on every residual edge, and
//! `p(v) = q(in(v))` is then a feasible price function of the graph.
//!
//! A vertex update cancels the at most one unit of flow through `v`,
//! rewrites `v`'s edges, repairs the potential locally, possibly saturates
//! `in(v) -> out(v)`, and restores a circulation with at most two shortest
//! augmenting paths.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, Edge, EdgeBatch, VertexId};
use crate::sssp::{checked_reduced, count_dijkstra, HeapEntry, PriceFunction, FEASIBILITY_EPS};
use crate::weight::Weight;

fn in_node(v: VertexId) -> usize {
    2 * v
}

fn out_node(v: VertexId) -> usize {
    2 * v + 1
}

/// A residual arc of the split graph.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Arc {
    /// `in(a) -> out(a)`, pushes flow through `a`.
    Through(VertexId),
    /// `out(a) -> in(a)`, cancels flow through `a`.
    Unthrough(VertexId),
    /// `out(u) -> in(z)` along graph edge `uz`.
    Edge(VertexId, VertexId, Weight),
    /// `in(z) -> out(u)`, cancels flow on graph edge `uz`.
    Unedge(VertexId, VertexId, Weight),
}

impl Arc {
    fn cost(self) -> f64 {
        match self {
            Arc::Through(_) | Arc::Unthrough(_) => 0.0,
            Arc::Edge(_, _, w) => w,
            Arc::Unedge(_, _, w) => -w,
        }
    }

    fn endpoints(self) -> (usize, usize) {
        match self {
            Arc::Through(a) => (in_node(a), out_node(a)),
            Arc::Unthrough(a) => (out_node(a), in_node(a)),
            Arc::Edge(u, z, _) => (out_node(u), in_node(z)),
            Arc::Unedge(u, z, _) => (in_node(z), out_node(u)),
        }
    }
}

#[derive(Debug, Clone)]
struct Removal {
    v: VertexId,
    incoming: EdgeBatch,
    outgoing: EdgeBatch,
}

#[derive(Debug, Clone)]
pub struct NegCycleDetector {
    g: DynamicDigraph,
    through: Vec<bool>,
    flow_succ: Vec<Option<VertexId>>,
    flow_pred: Vec<Option<VertexId>>,
    /// Potential per split-graph node, `in(v) = 2v`, `out(v) = 2v + 1`.
    q: Vec<f64>,
    cost: f64,
    dijkstra_last: usize,
    removals: Option<Vec<Removal>>,
}

impl NegCycleDetector {
    pub fn new(n: usize) -> Self {
        NegCycleDetector {
            g: DynamicDigraph::new(n),
            through: vec![false; n],
            flow_succ: vec![None; n],
            flow_pred: vec![None; n],
            q: vec![0.0; 2 * n],
            cost: 0.0,
            dijkstra_last: 0,
            removals: None,
        }
    }

    /// Loads every edge of `g` with one vertex update per vertex. The update
    /// at `v` carries `v`'s edges to vertices already loaded.
    pub fn from_graph(g: &DynamicDigraph) -> Result<Self> {
        let mut d = NegCycleDetector::new(g.n());
        for v in 0..g.n() {
            let inc: EdgeBatch = g
                .in_edges(v)
                .filter(|&(u, _)| u < v)
                .map(|(u, w)| Edge::new(u, v, w))
                .collect();
            let out: EdgeBatch = g
                .out_edges(v)
                .filter(|&(z, _)| z <= v)
                .map(|(z, w)| Edge::new(v, z, w))
                .collect();
            d.vertex_update(v, &inc, &out)?;
        }
        Ok(d)
    }

    pub fn graph(&self) -> &DynamicDigraph {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// Cost of the maintained circulation; negative iff a negative cycle exists.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn has_negative_cycle(&self) -> bool {
        self.cost < 0.0
    }

    /// Augmenting-path searches run by the most recent vertex update.
    pub fn dijkstra_count_last_update(&self) -> usize {
        self.dijkstra_last
    }

    /// Potential of `in(v)` in the sign convention where residual reduced
    /// costs read `c(e) - pi(x) + pi(y)`.
    pub fn pi_in(&self, v: VertexId) -> f64 {
        -self.q[in_node(v)]
    }

    pub fn pi_out(&self, v: VertexId) -> f64 {
        -self.q[out_node(v)]
    }

    /// Graph edges carrying one unit of flow.
    pub fn flow_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.flow_succ
            .iter()
            .enumerate()
            .filter_map(|(u, z)| z.map(|z| (u, z)))
    }

    pub fn price_function(&self) -> Result<PriceFunction> {
        if self.has_negative_cycle() {
            return Err(Error::NegativeCyclePresent);
        }
        Ok(PriceFunction::from_vec(
            (0..self.n()).map(|v| self.q[in_node(v)]).collect(),
        ))
    }

    pub fn removal_pending(&self) -> bool {
        self.removals.is_some()
    }

    pub fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<()> {
        // Validate everything before touching the flow.
        self.g.check_vertex(v)?;
        for e in new_in {
            self.g.check_vertex(e.u)?;
            if e.v != v {
                return Err(Error::InvalidBatch(format!(
                    "incoming edge {}->{} does not end at {v}",
                    e.u, e.v
                )));
            }
        }
        for e in new_out {
            self.g.check_vertex(e.v)?;
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

        let mut excess: Vec<usize> = Vec::with_capacity(2);
        let mut deficit: Vec<usize> = Vec::with_capacity(2);

        // Cancel the flow through v.
        if self.through[v] {
            let u = self.flow_pred[v].expect("flow enters v");
            let z = self.flow_succ[v].expect("flow leaves v");
            self.cost -= self.g.weight(u, v).expect("flow edge present");
            if u != v {
                self.cost -= self.g.weight(v, z).expect("flow edge present");
            }
            self.flow_succ[u] = None;
            self.flow_pred[v] = None;
            self.flow_succ[v] = None;
            self.flow_pred[z] = None;
            self.through[v] = false;
            if u != v {
                excess.push(out_node(u));
                deficit.push(in_node(z));
            }
        }

        self.g.apply_vertex_update(v, new_in, new_out)?;

        // Repair the potential on v's new edges; lowering in(v) first keeps a
        // self-loop feasible when out(v) is raised afterwards.
        let vi = in_node(v);
        let vo = out_node(v);
        for (u, w) in self.g.in_edges(v) {
            self.q[vi] = self.q[vi].min(self.q[out_node(u)] + w);
        }
        for (z, w) in self.g.out_edges(v) {
            self.q[vo] = self.q[vo].max(self.q[in_node(z)] - w);
        }

        if self.q[vi] - self.q[vo] < -FEASIBILITY_EPS {
            self.through[v] = true;
            excess.push(vo);
            deficit.push(vi);
        }

        debug_assert!(excess.len() <= 2 && excess.len() == deficit.len());
        self.dijkstra_last = 0;
        while !excess.is_empty() {
            let (s, t) = self.augment(&excess, &deficit)?;
            self.dijkstra_last += 1;
            excess.retain(|&x| x != s);
            deficit.retain(|&x| x != t);
        }
        if self.dijkstra_last > 2 {
            return Err(Error::InvariantViolation(format!(
                "{} augmentations in one update",
                self.dijkstra_last
            )));
        }
        Ok(())
    }

    /// Residual arcs entering split node `y`.
    fn residual_in(&self, y: usize, buf: &mut Vec<Arc>) {
        let a = y / 2;
        if y.is_multiple_of(2) {
            if self.through[a] {
                buf.push(Arc::Unthrough(a));
            }
            for (u, w) in self.g.in_edges(a) {
                if self.flow_pred[a] != Some(u) {
                    buf.push(Arc::Edge(u, a, w));
                }
            }
        } else {
            if !self.through[a] {
                buf.push(Arc::Through(a));
            }
            if let Some(z) = self.flow_succ[a] {
                let w = self.g.weight(a, z).expect("flow edge present");
                buf.push(Arc::Unedge(a, z, w));
            }
        }
    }

    /// Reverse Dijkstra from all deficit nodes until the first excess node
    /// settles; updates the potential and pushes one unit along the path.
    /// Returns the (excess, deficit) pair that was matched.
    fn augment(&mut self, excess: &[usize], deficit: &[usize]) -> Result<(usize, usize)> {
        count_dijkstra();
        let nodes = self.q.len();
        let mut dist = vec![f64::INFINITY; nodes];
        let mut done = vec![false; nodes];
        let mut next: Vec<Option<Arc>> = vec![None; nodes];
        let mut settled = Vec::new();
        let mut heap = BinaryHeap::new();
        for &t in deficit {
            dist[t] = 0.0;
            heap.push(HeapEntry { key: 0.0, v: t });
        }
        let mut buf = Vec::new();
        let mut found = None;
        while let Some(HeapEntry { key, v: y }) = heap.pop() {
            if done[y] || key > dist[y] {
                continue;
            }
            done[y] = true;
            settled.push(y);
            if excess.contains(&y) {
                found = Some(y);
                break;
            }
            buf.clear();
            self.residual_in(y, &mut buf);
            for &arc in &buf {
                let (x, _) = arc.endpoints();
                let r = checked_reduced(x / 2, y / 2, arc.cost() + self.q[x] - self.q[y])?;
                if done[x] {
                    continue;
                }
                let nd = key + r;
                if nd < dist[x] {
                    dist[x] = nd;
                    next[x] = Some(arc);
                    heap.push(HeapEntry { key: nd, v: x });
                }
            }
        }
        let s = found
            .ok_or_else(|| Error::InvariantViolation("excess cannot reach any deficit".into()))?;
        let cap = dist[s];
        for x in 0..nodes {
            let d = if done[x] { dist[x] } else { cap };
            self.q[x] -= d;
        }

        let mut path = Vec::new();
        let mut x = s;
        while let Some(arc) = next[x] {
            path.push(arc);
            x = arc.endpoints().1;
        }
        let t = x;
        for &arc in &path {
            match arc {
                Arc::Unthrough(a) => self.through[a] = false,
                Arc::Unedge(u, z, w) => {
                    self.flow_succ[u] = None;
                    self.flow_pred[z] = None;
                    self.cost += -w;
                }
                _ => {}
            }
        }
        for &arc in &path {
            match arc {
                Arc::Through(a) => self.through[a] = true,
                Arc::Edge(u, z, w) => {
                    self.flow_succ[u] = Some(z);
                    self.flow_pred[z] = Some(u);
                    self.cost += w;
                }
                _ => {}
            }
        }
        Ok((s, t))
    }

    /// Clears every vertex of `d` (one vertex update each) and records the
    /// removed edges for [`revert`](Self::revert).
    pub fn remove_vertices(&mut self, d: &[VertexId]) -> Result<()> {
        if self.removals.is_some() {
            return Err(Error::RemovalPending);
        }
        for &v in d {
            self.g.check_vertex(v)?;
        }
        let mut log = Vec::with_capacity(d.len());
        let mut seen = vec![false; self.n()];
        for &v in d {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            let outgoing: EdgeBatch = self
                .g
                .out_edges(v)
                .map(|(z, w)| Edge::new(v, z, w))
                .collect();
            let incoming: EdgeBatch = self
                .g
                .in_edges(v)
                .filter(|&(u, _)| u != v)
                .map(|(u, w)| Edge::new(u, v, w))
                .collect();
            self.vertex_update(v, &EdgeBatch::new(), &EdgeBatch::new())?;
            log.push(Removal {
                v,
                incoming,
                outgoing,
            });
        }
        self.removals = Some(log);
        Ok(())
    }

    /// Restores the edges cleared by the pending removal, newest first.
    pub fn revert(&mut self) -> Result<()> {
        let log = self.removals.take().ok_or(Error::NothingToRevert)?;
        for r in log.iter().rev() {
            self.vertex_update(r.v, &r.incoming, &r.outgoing)?;
        }
        Ok(())
    }

    /// Full scan of conservation, capacities, the cost ledger and residual
    /// feasibility of the potential.
    pub fn check_structure(&self) -> std::result::Result<(), String> {
        let n = self.n();
        let mut cost = 0.0;
        for v in 0..n {
            let has_pred = self.flow_pred[v].is_some();
            let has_succ = self.flow_succ[v].is_some();
            if has_pred != self.through[v] || has_succ != self.through[v] {
                return Err(format!("conservation broken at {v}"));
            }
            if let Some(z) = self.flow_succ[v] {
                if self.flow_pred[z] != Some(v) {
                    return Err(format!("flow links disagree on {v}->{z}"));
                }
                match self.g.weight(v, z) {
                    Some(w) => cost += w,
                    None => return Err(format!("flow on missing edge {v}->{z}")),
                }
            }
        }
        if cost != self.cost {
            return Err(format!("cost ledger {} != recount {cost}", self.cost));
        }
        let mut buf = Vec::new();
        for y in 0..2 * n {
            buf.clear();
            self.residual_in(y, &mut buf);
            for arc in &buf {
                let (x, _) = arc.endpoints();
                let r = arc.cost() + self.q[x] - self.q[y];
                if r < -FEASIBILITY_EPS {
                    return Err(format!("residual arc {arc:?} has reduced cost {r}"));
                }
            }
        }
        if self.cost == 0.0 {
            for v in 0..n {
                if self.through[v] && self.q[in_node(v)] != self.q[out_node(v)] {
                    return Err(format!(
                        "saturated split edge of {v} has nonzero reduced cost"
                    ));
                }
            }
            for (u, z) in self.flow_edges() {
                let w = self.g.weight(u, z).expect("checked above");
                if w + self.q[out_node(u)] - self.q[in_node(z)] != 0.0 {
                    return Err(format!("flow edge {u}->{z} has nonzero reduced cost"));
                }
            }
        }
        Ok(())
    }
}
