//! Exact fully dynamic pair distances and minimum cycle weight under vertex
//! updates.
//!
//! Time is cut into phases. A phase starts by snapshotting the graph `G0`,
//! picking the `delta` vertices of highest degree as `D*`, and building a
//! [`BatchDeletionIndex`] on `G0 \ D*`. Within a phase the vertices touched
//! by updates form `T`; the graph outside `U = D* ∪ T` still equals `G0`,
//! so the index answers for paths avoiding `U` and one Dijkstra pair per
//! vertex of `U` covers the rest. The phase ends once `|T|` reaches `delta`.
//! A fully dynamic negative-cycle detector on the current graph supplies
//! prices for every Dijkstra run.

use crate::error::{Error, Result};
use crate::graph::{DynamicDigraph, EdgeBatch, PairSet, VertexId};
use crate::mpsp_batch::{BatchDeletionIndex, MpspAnswer, MpspConfig};
use crate::negcycle::NegCycleDetector;
use crate::sssp::{dijkstra, Direction, PriceFunction};
use crate::weight::{ExtWeight, Weight};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicExactConfig {
    /// Phase length and `|D*|`. `None` picks [`default_delta`].
    pub delta: Option<usize>,
    /// Hub sampling constant of the per-phase index.
    pub c_hit: f64,
    pub seed: u64,
}

impl Default for DynamicExactConfig {
    fn default() -> Self {
        DynamicExactConfig {
            delta: None,
            c_hit: MpspConfig::default().c_hit,
            seed: 0,
        }
    }
}

/// `ceil(n^(1/3) * ln(n)^(2/3))`, at least 1.
pub fn default_delta(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let n = n as f64;
    (n.cbrt() * n.ln().powf(2.0 / 3.0)).ceil().max(1.0) as usize
}

/// Sizes of the current phase, for inspection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseStats {
    pub phase: u64,
    /// Edges of the graph when the phase started.
    pub start_edges: usize,
    /// Edges of the indexed graph `G0 \ D*`.
    pub index_edges: usize,
    pub touched: usize,
}

#[derive(Debug, Clone)]
struct Phased {
    delta: usize,
    config: DynamicExactConfig,
    negdet: NegCycleDetector,
    phase: u64,
    start_edges: usize,
    d_star: Vec<VertexId>,
    touched: Vec<VertexId>,
    in_u: Vec<bool>,
    index: BatchDeletionIndex,
}

impl Phased {
    fn new(n: usize, config: DynamicExactConfig, pairs: PairSet) -> Result<Self> {
        let delta = config.delta.unwrap_or_else(|| default_delta(n));
        if delta == 0 {
            return Err(Error::InvalidConfig("delta must be at least 1".into()));
        }
        let g = DynamicDigraph::new(n);
        let index = BatchDeletionIndex::build(&g, pairs, index_config(&config, delta, 0))?;
        let mut s = Phased {
            delta,
            config,
            negdet: NegCycleDetector::new(n),
            phase: 0,
            start_edges: 0,
            d_star: Vec::new(),
            touched: Vec::new(),
            in_u: vec![false; n],
            index,
        };
        s.restart(|_| None)?;
        Ok(s)
    }

    fn graph(&self) -> &DynamicDigraph {
        self.negdet.graph()
    }

    /// Starts a new phase on the current graph. `pairs_for` picks the index
    /// pairs from `G0 \ D*`, or keeps the old ones when it returns `None`.
    fn restart(
        &mut self,
        pairs_for: impl FnOnce(&DynamicDigraph) -> Option<PairSet>,
    ) -> Result<()> {
        let g = self.graph().clone();
        let n = g.n();
        let mut order: Vec<VertexId> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        order.truncate(self.delta.min(n));
        order.sort_unstable();
        self.in_u = vec![false; n];
        for &v in &order {
            self.in_u[v] = true;
        }
        let indexed = g.without_vertices(&self.in_u);
        let pairs = pairs_for(&indexed).unwrap_or_else(|| self.index.pairs().clone());
        self.phase += 1;
        self.index = BatchDeletionIndex::build(
            &indexed,
            pairs,
            index_config(&self.config, self.delta, self.phase),
        )?;
        self.start_edges = g.m();
        self.d_star = order;
        self.touched.clear();
        Ok(())
    }

    /// Applies the update and reports whether the phase is over.
    fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<bool> {
        self.negdet.vertex_update(v, new_in, new_out)?;
        if !self.touched.contains(&v) {
            self.touched.push(v);
            self.in_u[v] = true;
        }
        Ok(self.touched.len() >= self.delta)
    }

    fn u_set(&self) -> Vec<VertexId> {
        (0..self.in_u.len()).filter(|&v| self.in_u[v]).collect()
    }

    fn prices(&self) -> Result<Option<PriceFunction>> {
        if self.negdet.has_negative_cycle() {
            Ok(None)
        } else {
            self.negdet.price_function().map(Some)
        }
    }

    fn stats(&self) -> PhaseStats {
        PhaseStats {
            phase: self.phase,
            start_edges: self.start_edges,
            index_edges: self.index.graph().m(),
            touched: self.touched.len(),
        }
    }
}

fn index_config(config: &DynamicExactConfig, delta: usize, phase: u64) -> MpspConfig {
    MpspConfig {
        d_max: 2 * delta,
        c_hit: config.c_hit,
        seed: config.seed ^ phase.wrapping_mul(0x9e37_79b9_7f4a_7c15),
    }
}

/// Exact distances for a fixed list of pairs.
#[derive(Debug, Clone)]
pub struct DynamicMpsp {
    inner: Phased,
}

impl DynamicMpsp {
    pub fn new(
        n: usize,
        pairs: Vec<(VertexId, VertexId)>,
        config: DynamicExactConfig,
    ) -> Result<Self> {
        let pairs = PairSet::new(n, pairs)?;
        Ok(DynamicMpsp {
            inner: Phased::new(n, config, pairs)?,
        })
    }

    pub fn delta(&self) -> usize {
        self.inner.delta
    }

    pub fn graph(&self) -> &DynamicDigraph {
        self.inner.graph()
    }

    pub fn pairs(&self) -> &PairSet {
        self.inner.index.pairs()
    }

    pub fn stats(&self) -> PhaseStats {
        self.inner.stats()
    }

    /// High-degree vertices excluded from the current index.
    pub fn d_star(&self) -> &[VertexId] {
        &self.inner.d_star
    }

    pub fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<()> {
        if self.inner.vertex_update(v, new_in, new_out)? {
            self.inner.restart(|_| None)?;
        }
        Ok(())
    }

    pub fn query(&self) -> Result<MpspAnswer> {
        let Some(p) = self.inner.prices()? else {
            return Ok(MpspAnswer::NegativeCycle);
        };
        let u = self.inner.u_set();
        let report = self.inner.index.query_with_prices(&u, &p)?;
        let pairs = self.pairs().pairs();
        let mut best: Vec<ExtWeight> = pairs
            .iter()
            .zip(report.distances)
            .map(|(&(s, t), d)| if s == t { ExtWeight::ZERO } else { d })
            .collect();
        let g = self.graph();
        for &x in &u {
            let fwd = dijkstra(g, x, &p, Direction::Fwd, None)?;
            let rev = dijkstra(g, x, &p, Direction::Rev, None)?;
            for (l, &(s, t)) in pairs.iter().enumerate() {
                best[l] = best[l].min(ExtWeight::from_f64(rev.dist[s] + fwd.dist[t]));
            }
        }
        Ok(MpspAnswer::Distances(best))
    }
}

/// Exact minimum cycle weight.
#[derive(Debug, Clone)]
pub struct DynamicMinCycle {
    inner: Phased,
    /// Weight of the indexed edge behind each pair; pair `(v, u)` closes
    /// edge `u -> v`.
    closing: Vec<Weight>,
}

fn reversed_edges(g: &DynamicDigraph) -> (PairSet, Vec<Weight>) {
    let (pairs, weights): (Vec<_>, Vec<_>) = g.edges().map(|e| ((e.v, e.u), e.w)).unzip();
    (
        PairSet::new(g.n(), pairs).expect("edges are in range"),
        weights,
    )
}

impl DynamicMinCycle {
    pub fn new(n: usize, config: DynamicExactConfig) -> Result<Self> {
        let inner = Phased::new(n, config, PairSet::new(n, Vec::new())?)?;
        Ok(DynamicMinCycle {
            inner,
            closing: Vec::new(),
        })
    }

    pub fn delta(&self) -> usize {
        self.inner.delta
    }

    pub fn graph(&self) -> &DynamicDigraph {
        self.inner.graph()
    }

    pub fn stats(&self) -> PhaseStats {
        self.inner.stats()
    }

    pub fn d_star(&self) -> &[VertexId] {
        &self.inner.d_star
    }

    pub fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<()> {
        if self.inner.vertex_update(v, new_in, new_out)? {
            let mut closing = Vec::new();
            self.inner.restart(|indexed| {
                let (pairs, weights) = reversed_edges(indexed);
                closing = weights;
                Some(pairs)
            })?;
            self.closing = closing;
        }
        Ok(())
    }

    /// Minimum cycle weight: `-inf` with a negative cycle, `+inf` when
    /// acyclic.
    pub fn query(&self) -> Result<ExtWeight> {
        let Some(p) = self.inner.prices()? else {
            return Ok(ExtWeight::NegInf);
        };
        let u = self.inner.u_set();
        let report = self.inner.index.query_with_prices(&u, &p)?;
        let mut best = ExtWeight::PosInf;
        for (d, &w) in report.distances.iter().zip(&self.closing) {
            best = best.min(*d + ExtWeight::Finite(w));
        }
        let g = self.graph();
        for &x in &u {
            let fwd = dijkstra(g, x, &p, Direction::Fwd, None)?;
            for (y, w) in g.in_edges(x) {
                best = best.min(ExtWeight::from_f64(fwd.dist[y] + w));
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn batch(edges: &[(usize, usize, f64)]) -> EdgeBatch {
        edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect()
    }

    #[test]
    fn default_delta_values() {
        assert_eq!(default_delta(0), 1);
        assert_eq!(default_delta(1), 1);
        // 8^(1/3) * ln(8)^(2/3) = 2 * 1.5618...
        assert_eq!(default_delta(8), 4);
        assert_eq!(default_delta(1000), 37);
    }

    #[test]
    fn triangle_cycle() {
        let mut m = DynamicMinCycle::new(
            3,
            DynamicExactConfig {
                delta: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(m.query().unwrap(), ExtWeight::PosInf);
        m.vertex_update(0, &batch(&[(2, 0, 1.0)]), &batch(&[(0, 1, 1.0)]))
            .unwrap();
        m.vertex_update(1, &batch(&[(0, 1, 1.0)]), &batch(&[(1, 2, 1.0)]))
            .unwrap();
        assert_eq!(m.query().unwrap(), ExtWeight::Finite(3.0));
        assert_eq!(m.stats().phase, 3);
        m.vertex_update(2, &batch(&[(1, 2, -5.0)]), &batch(&[(2, 0, 1.0)]))
            .unwrap();
        assert_eq!(m.query().unwrap(), ExtWeight::NegInf);
        m.vertex_update(1, &EdgeBatch::new(), &EdgeBatch::new())
            .unwrap();
        assert_eq!(m.query().unwrap(), ExtWeight::PosInf);
    }

    #[test]
    fn zero_delta_rejected() {
        let config = DynamicExactConfig {
            delta: Some(0),
            ..Default::default()
        };
        assert!(DynamicMinCycle::new(3, config).is_err());
        assert!(DynamicMpsp::new(3, vec![(0, 1)], config).is_err());
    }

    #[test]
    fn pair_distances_across_phases() {
        let mut d = DynamicMpsp::new(
            4,
            vec![(0, 3), (3, 3), (3, 0)],
            DynamicExactConfig {
                delta: Some(2),
                ..Default::default()
            },
        )
        .unwrap();
        d.vertex_update(1, &batch(&[(0, 1, 2.0)]), &batch(&[(1, 3, 2.0)]))
            .unwrap();
        d.vertex_update(2, &batch(&[(0, 2, 1.0)]), &batch(&[(2, 3, 1.0)]))
            .unwrap();
        assert_eq!(d.stats().phase, 2);
        assert_eq!(
            d.query().unwrap(),
            MpspAnswer::Distances(vec![
                ExtWeight::Finite(2.0),
                ExtWeight::ZERO,
                ExtWeight::PosInf
            ])
        );
        d.vertex_update(2, &EdgeBatch::new(), &EdgeBatch::new())
            .unwrap();
        assert_eq!(
            d.query().unwrap(),
            MpspAnswer::Distances(vec![
                ExtWeight::Finite(4.0),
                ExtWeight::ZERO,
                ExtWeight::PosInf
            ])
        );
    }
}
