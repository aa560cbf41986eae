//! One structure instance replaying a workload, with a shadow graph for
//! input validation and oracle answers.

use clap::ValueEnum;
use dyncycle_core::dynamic_exact::{DynamicExactConfig, DynamicMinCycle, DynamicMpsp};
use dyncycle_core::graph::centered_batch;
use dyncycle_core::harness::{
    oracle_mpsp, oracle_negative_cycle, oracle_phi, oracle_threshold, Op,
};
use dyncycle_core::{
    ApproxMinCycle, DynamicDigraph, EdgeThresholdDetector, ExtWeight, MpspAnswer, NegCycleDetector,
    ThresholdDetector, VertexId, Weight,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Structure {
    /// Cycle lighter than `--mu`, vertex updates.
    Threshold,
    /// `(1 + eps)`-approximate minimum cycle weight.
    Approx,
    /// Negative cycle flag.
    Negcycle,
    /// Exact distances for the pairs in `--pairs`.
    Mpsp,
    /// Exact minimum cycle weight.
    ExactMincycle,
    /// Cycle lighter than `--mu`, edge updates over a distance oracle.
    EdgeThreshold,
    /// Minimum cycle weight recomputed from scratch per query.
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub structure: Structure,
    pub mu: Option<f64>,
    pub eps: f64,
    pub c: Option<f64>,
    pub cap: Option<f64>,
    pub delta: Option<usize>,
    pub pairs: Vec<(VertexId, VertexId)>,
    pub seed: u64,
}

enum Engine {
    Threshold(ThresholdDetector),
    Approx(ApproxMinCycle),
    NegCycle(NegCycleDetector),
    Mpsp(DynamicMpsp),
    MinCycle(DynamicMinCycle),
    EdgeThreshold(EdgeThresholdDetector),
    Oracle,
}

pub struct Session {
    engine: Engine,
    shadow: DynamicDigraph,
    mu: f64,
    pairs: Vec<(VertexId, VertexId)>,
    /// Approximation thresholds and the lower cycle bound `c`.
    approx: Option<(Vec<Weight>, Weight)>,
}

fn require_mu(p: &Params) -> Result<f64, String> {
    p.mu.ok_or_else(|| format!("--mu is required for {:?}", p.structure))
}

fn exact_config(p: &Params) -> DynamicExactConfig {
    DynamicExactConfig {
        delta: p.delta,
        seed: p.seed,
        ..Default::default()
    }
}

impl Session {
    /// `default_cap` is used for `--C` when it is not given.
    pub fn new(n: usize, p: &Params, default_cap: f64) -> Result<Self, String> {
        let err = |e: dyncycle_core::Error| e.to_string();
        let mut mu = 0.0;
        let mut approx = None;
        let engine = match p.structure {
            Structure::Threshold => {
                mu = require_mu(p)?;
                Engine::Threshold(ThresholdDetector::new(n, mu).map_err(err)?)
            }
            Structure::EdgeThreshold => {
                mu = require_mu(p)?;
                Engine::EdgeThreshold(EdgeThresholdDetector::new(n, mu).map_err(err)?)
            }
            Structure::Approx => {
                let c = p.c.unwrap_or(1.0);
                let cap = p.cap.unwrap_or(default_cap.max(c));
                let a = ApproxMinCycle::new(n, p.eps, c, cap).map_err(err)?;
                approx = Some((a.thresholds().to_vec(), c));
                Engine::Approx(a)
            }
            Structure::Negcycle => Engine::NegCycle(NegCycleDetector::new(n)),
            Structure::Mpsp => {
                if p.pairs.is_empty() {
                    return Err("--pairs is required for mpsp".into());
                }
                Engine::Mpsp(DynamicMpsp::new(n, p.pairs.clone(), exact_config(p)).map_err(err)?)
            }
            Structure::ExactMincycle => {
                Engine::MinCycle(DynamicMinCycle::new(n, exact_config(p)).map_err(err)?)
            }
            Structure::Oracle => Engine::Oracle,
        };
        Ok(Session {
            engine,
            shadow: DynamicDigraph::new(n),
            mu,
            pairs: p.pairs.clone(),
            approx,
        })
    }

    /// Checks `op` against the current graph without applying it.
    fn validate(&self, op: &Op) -> Result<(), String> {
        let g = &self.shadow;
        let vertex = |x: VertexId| g.check_vertex(x).map_err(|e| e.to_string());
        let weight = |w: Weight| {
            if w.is_finite() {
                Ok(())
            } else {
                Err(format!("weight {w} is not finite"))
            }
        };
        match op {
            Op::VertexUpdate {
                v,
                incoming,
                outgoing,
            } => {
                vertex(*v)?;
                for &(x, w) in incoming.iter().chain(outgoing) {
                    vertex(x)?;
                    weight(w)?;
                }
            }
            Op::InsertEdge { u, v, w } => {
                vertex(*u)?;
                vertex(*v)?;
                weight(*w)?;
                if g.contains(*u, *v) {
                    return Err(format!("edge {u}->{v} already present"));
                }
            }
            Op::DeleteEdge { u, v } => {
                vertex(*u)?;
                vertex(*v)?;
                if !g.contains(*u, *v) {
                    return Err(format!("edge {u}->{v} not present"));
                }
            }
            Op::Query => {}
        }
        Ok(())
    }

    /// Applies an update. Edge updates reach vertex-update structures as an
    /// update of the tail vertex; vertex updates reach edge-update
    /// structures as deletions followed by insertions.
    pub fn apply(&mut self, op: &Op) -> Result<(), String> {
        self.validate(op)?;
        if let Engine::EdgeThreshold(d) = &mut self.engine {
            let err = |e: dyncycle_core::Error| e.to_string();
            match op {
                Op::VertexUpdate {
                    v,
                    incoming,
                    outgoing,
                } => {
                    for e in &self.shadow.incident_edges(*v) {
                        d.delete_edge(e.u, e.v).map_err(err)?;
                    }
                    for e in &centered_batch(*v, incoming, outgoing).collapsed() {
                        d.insert_edge(e.u, e.v, e.w).map_err(err)?;
                    }
                }
                Op::InsertEdge { u, v, w } => d.insert_edge(*u, *v, *w).map_err(err)?,
                Op::DeleteEdge { u, v } => d.delete_edge(*u, *v).map_err(err)?,
                Op::Query => {}
            }
        } else if let Some((v, inc, out)) = self.as_vertex_update(op) {
            let err = |e: dyncycle_core::Error| e.to_string();
            let new_in = centered_batch(v, &inc, &[]);
            let new_out = centered_batch(v, &[], &out);
            match &mut self.engine {
                Engine::Threshold(d) => d.vertex_update(v, &new_in, &new_out).map_err(err)?,
                Engine::Approx(a) => a.vertex_update(v, &new_in, &new_out).map_err(err)?,
                Engine::NegCycle(d) => d.vertex_update(v, &new_in, &new_out).map_err(err)?,
                Engine::Mpsp(d) => d.vertex_update(v, &new_in, &new_out).map_err(err)?,
                Engine::MinCycle(d) => d.vertex_update(v, &new_in, &new_out).map_err(err)?,
                Engine::EdgeThreshold(_) | Engine::Oracle => {}
            }
        }
        dyncycle_core::harness::apply(&mut self.shadow, op);
        Ok(())
    }

    /// `op` as a replacement of the edges at one vertex. Self-loops go in
    /// the outgoing list only.
    #[allow(clippy::type_complexity)]
    fn as_vertex_update(
        &self,
        op: &Op,
    ) -> Option<(VertexId, Vec<(VertexId, Weight)>, Vec<(VertexId, Weight)>)> {
        let g = &self.shadow;
        let current = |u: VertexId| {
            let inc: Vec<_> = g.in_edges(u).filter(|&(x, _)| x != u).collect();
            let out: Vec<_> = g.out_edges(u).collect();
            (inc, out)
        };
        match op {
            Op::VertexUpdate {
                v,
                incoming,
                outgoing,
            } => Some((*v, incoming.clone(), outgoing.clone())),
            Op::InsertEdge { u, v, w } => {
                let (inc, mut out) = current(*u);
                out.push((*v, *w));
                Some((*u, inc, out))
            }
            Op::DeleteEdge { u, v } => {
                let (inc, mut out) = current(*u);
                out.retain(|&(x, _)| x != *v);
                Some((*u, inc, out))
            }
            Op::Query => None,
        }
    }

    /// The structure's answer to a query.
    pub fn answer(&self) -> Result<String, String> {
        let err = |e: dyncycle_core::Error| e.to_string();
        Ok(match &self.engine {
            Engine::Threshold(d) => d.cycle_below_threshold().to_string(),
            Engine::EdgeThreshold(d) => d.cycle_below_threshold().to_string(),
            Engine::Approx(a) => a.estimate().to_string(),
            Engine::NegCycle(d) => d.has_negative_cycle().to_string(),
            Engine::Mpsp(d) => format_mpsp(&d.query().map_err(err)?),
            Engine::MinCycle(d) => d.query().map_err(err)?.to_string(),
            Engine::Oracle => oracle_phi(&self.shadow).to_string(),
        })
    }

    /// The answer recomputed from scratch on the current graph.
    pub fn expected(&self) -> String {
        let g = &self.shadow;
        match &self.engine {
            Engine::Threshold(_) | Engine::EdgeThreshold(_) => {
                oracle_threshold(g, self.mu).to_string()
            }
            Engine::Approx(_) => {
                let (thresholds, c) = self.approx.as_ref().expect("approx session");
                approx_expected(oracle_phi(g), thresholds, *c).to_string()
            }
            Engine::NegCycle(_) => oracle_negative_cycle(g).to_string(),
            Engine::Mpsp(_) => format_mpsp(&oracle_mpsp(g, &[], &self.pairs)),
            Engine::MinCycle(_) | Engine::Oracle => oracle_phi(g).to_string(),
        }
    }

    /// Total threshold-update calls so far, for structures that count them.
    pub fn update_calls(&self) -> u64 {
        match &self.engine {
            Engine::Threshold(d) => d.counters().update_calls,
            Engine::EdgeThreshold(d) => d.counters().update_calls,
            Engine::Approx(a) => a.detectors().map(|d| d.counters().update_calls).sum(),
            _ => 0,
        }
    }
}

/// The estimate an exact run of the threshold ladder produces for `phi`.
fn approx_expected(phi: ExtWeight, thresholds: &[Weight], c: Weight) -> ExtWeight {
    if phi < ExtWeight::ZERO {
        return ExtWeight::NegInf;
    }
    if phi < ExtWeight::Finite(c) {
        return ExtWeight::ZERO;
    }
    thresholds
        .iter()
        .find(|&&t| phi < ExtWeight::Finite(t))
        .map_or(ExtWeight::PosInf, |&t| ExtWeight::Finite(t))
}

fn format_mpsp(a: &MpspAnswer) -> String {
    match a {
        MpspAnswer::NegativeCycle => "-inf".to_string(),
        MpspAnswer::Distances(d) => d
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dyncycle_core::harness::{generate, UpdateKind, WeightRegime, WorkloadParams};

    fn params(structure: Structure) -> Params {
        Params {
            structure,
            mu: Some(150.0),
            eps: 0.5,
            c: None,
            cap: None,
            delta: Some(3),
            pairs: vec![(0, 1), (2, 2), (3, 0)],
            seed: 1,
        }
    }

    #[test]
    fn every_structure_agrees_with_its_oracle() {
        let all = [
            Structure::Threshold,
            Structure::Approx,
            Structure::Negcycle,
            Structure::Mpsp,
            Structure::ExactMincycle,
            Structure::EdgeThreshold,
            Structure::Oracle,
        ];
        for kind in [UpdateKind::Vertex, UpdateKind::Edge] {
            for regime in [WeightRegime::NonNeg, WeightRegime::Signed] {
                let w = generate(&WorkloadParams {
                    n: 10,
                    seed: 2,
                    updates: 40,
                    regime,
                    kind,
                    ..WorkloadParams::default()
                });
                for s in all {
                    let mut session = Session::new(w.n, &params(s), 1000.0).unwrap();
                    for op in &w.ops {
                        session.apply(op).unwrap();
                        if *op == Op::Query {
                            assert_eq!(session.answer().unwrap(), session.expected(), "{s:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_ops_are_rejected() {
        let mut s = Session::new(3, &params(Structure::Threshold), 10.0).unwrap();
        assert!(s.apply(&Op::DeleteEdge { u: 0, v: 1 }).is_err());
        s.apply(&Op::InsertEdge { u: 0, v: 1, w: 2.0 }).unwrap();
        assert!(s.apply(&Op::InsertEdge { u: 0, v: 1, w: 2.0 }).is_err());
        assert!(s.apply(&Op::InsertEdge { u: 0, v: 9, w: 2.0 }).is_err());
        assert!(s
            .apply(&Op::VertexUpdate {
                v: 1,
                incoming: vec![(0, f64::NAN)],
                outgoing: vec![]
            })
            .is_err());
    }

    #[test]
    fn missing_parameters() {
        let mut p = params(Structure::Threshold);
        p.mu = None;
        assert!(Session::new(3, &p, 10.0).is_err());
        let mut p = params(Structure::Mpsp);
        p.pairs.clear();
        assert!(Session::new(3, &p, 10.0).is_err());
    }

    #[test]
    fn approx_expectation_ladder() {
        let t = [1.0, 1.5, 2.25];
        assert_eq!(
            approx_expected(ExtWeight::NegInf, &t, 1.0),
            ExtWeight::NegInf
        );
        assert_eq!(approx_expected(ExtWeight::ZERO, &t, 1.0), ExtWeight::ZERO);
        assert_eq!(
            approx_expected(ExtWeight::Finite(1.0), &t, 1.0),
            ExtWeight::Finite(1.5)
        );
        assert_eq!(
            approx_expected(ExtWeight::Finite(2.0), &t, 1.0),
            ExtWeight::Finite(2.25)
        );
        assert_eq!(
            approx_expected(ExtWeight::Finite(3.0), &t, 1.0),
            ExtWeight::PosInf
        );
        assert_eq!(
            approx_expected(ExtWeight::PosInf, &t, 1.0),
            ExtWeight::PosInf
        );
    }
}
