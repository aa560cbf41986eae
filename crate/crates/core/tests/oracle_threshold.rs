use dyncycle_core::harness::{
    generate, oracle_apsp, oracle_phi, oracle_threshold, ApspOracle, Op, UpdateKind, WeightRegime,
    WorkloadParams,
};
use dyncycle_core::oracle_threshold::Insertion;
use dyncycle_core::{DynamicDistanceOracle, EdgeThresholdDetector, ExtWeight, NaiveOracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn apply(d: &mut EdgeThresholdDetector, op: &Op) {
    match *op {
        Op::InsertEdge { u, v, w } => d.insert_edge(u, v, w).unwrap(),
        Op::DeleteEdge { u, v } => d.delete_edge(u, v).unwrap(),
        _ => unreachable!("edge workload"),
    }
}

fn run(params: &WorkloadParams, mu: f64) -> usize {
    let w = generate(params);
    let mut d = EdgeThresholdDetector::new(w.n, mu).unwrap();
    let mut positives = 0;
    for op in w.ops.iter().filter(|o| o.is_update()) {
        apply(&mut d, op);
        let expect = oracle_threshold(d.graph(), mu);
        assert_eq!(
            d.cycle_below_threshold(),
            expect,
            "seed {} mu {mu}",
            params.seed
        );
        positives += expect as usize;
        assert!(oracle_phi(d.settled()) >= ExtWeight::Finite(mu));
        assert_eq!(d.oracle().graph(), d.settled());
        assert!(d.oracle().prices().is_feasible(d.settled()));
        d.check_structure().unwrap();
        let c = d.counters();
        assert!(c.update_calls <= 2 * c.inserts + c.deletes);
        assert!(c.oracle_calls() <= 8 * (c.inserts + c.deletes));
    }
    positives
}

#[test]
fn edge_workloads_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut positives = 0;
    for seed in 0..30 {
        let n = rng.gen_range(2..30);
        let params = WorkloadParams {
            n,
            seed,
            updates: 150,
            kind: UpdateKind::Edge,
            avg_degree: rng.gen_range(1.0..4.0),
            max_weight: 100,
            ..WorkloadParams::default()
        };
        let mu = rng.gen_range(0.0..(3 * n * 100) as f64).floor();
        positives += run(&params, mu);
    }
    assert!(positives > 0);
}

#[test]
fn signed_weights_keep_settled_part_acyclic_below_mu() {
    for seed in 0..15 {
        let params = WorkloadParams {
            n: 12,
            seed,
            updates: 120,
            kind: UpdateKind::Edge,
            regime: WeightRegime::Signed,
            avg_degree: 1.5,
            max_weight: 20,
            ..WorkloadParams::default()
        };
        run(&params, 5.0);
        run(&params, 0.0);
    }
}

#[test]
fn naive_oracle_refuses_exactly_negative_closures() {
    let mut refusals = 0;
    for seed in 0..40 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..12);
        let mut o = NaiveOracle::new(n);
        for _ in 0..60 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if o.graph().contains(u, v) {
                o.delete_edge(u, v).unwrap();
                continue;
            }
            let w = rng.gen_range(-10..=20) as f64;
            let ApspOracle::Distances(before) = oracle_apsp(o.graph(), &[]) else {
                panic!("oracle graph has a negative cycle")
            };
            let refuse = before[v][u] + w < 0.0;
            let got = o.insert_edge(u, v, w).unwrap();
            assert_eq!(got == Insertion::RefusedNegativeCycle, refuse);
            refusals += refuse as usize;
            assert!(o.prices().is_feasible(o.graph()));
            let ApspOracle::Distances(after) = oracle_apsp(o.graph(), &[]) else {
                panic!("accepted insertion created a negative cycle")
            };
            for s in 0..n {
                for t in 0..n {
                    assert_eq!(o.distance(s, t).unwrap(), ExtWeight::from_f64(after[s][t]));
                }
            }
        }
    }
    assert!(refusals > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn detector_matches_oracle(seed in any::<u64>(), n in 1usize..15, mu in 0.0f64..400.0) {
        let params = WorkloadParams {
            n,
            seed,
            updates: 60,
            kind: UpdateKind::Edge,
            max_weight: 50,
            ..WorkloadParams::default()
        };
        let w = generate(&params);
        let mut d = EdgeThresholdDetector::new(n, mu).unwrap();
        for op in w.ops.iter().filter(|o| o.is_update()) {
            apply(&mut d, op);
            prop_assert_eq!(d.cycle_below_threshold(), oracle_threshold(d.graph(), mu));
        }
    }
}
