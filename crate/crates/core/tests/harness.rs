mod common;

use common::dfs_min_cycle;
use dyncycle_core::harness::{
    generate, oracle_mpsp, oracle_negative_cycle, oracle_phi, oracle_threshold, random_graph,
    UpdateKind, WeightRegime, WorkloadParams,
};
use dyncycle_core::{ExtWeight, MpspAnswer};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mean_degree(kind: UpdateKind, avg_degree: f64) -> f64 {
    let mut total = 0.0;
    for seed in 0..100 {
        let params = WorkloadParams {
            n: 30,
            seed,
            updates: 400,
            avg_degree,
            kind,
            ..WorkloadParams::default()
        };
        let g = generate(&params).final_graph();
        total += g.m() as f64 / g.n() as f64;
    }
    total / 100.0
}

#[test]
fn density_target_within_twenty_percent() {
    for kind in [UpdateKind::Vertex, UpdateKind::Edge] {
        for target in [1.0, 3.0] {
            let got = mean_degree(kind, target);
            assert!(
                (got - target).abs() <= 0.2 * target,
                "{kind:?}: {got} vs {target}"
            );
        }
    }
}

#[test]
fn signed_regime_produces_both_flags() {
    let mut flags = [0; 2];
    for seed in 0..100 {
        let params = WorkloadParams {
            n: 10,
            seed,
            updates: 20,
            regime: WeightRegime::Signed,
            avg_degree: 1.5,
            ..WorkloadParams::default()
        };
        flags[oracle_negative_cycle(&generate(&params).final_graph()) as usize] += 1;
    }
    assert!(flags[0] > 0 && flags[1] > 0, "{flags:?}");
}

#[test]
fn replay_is_deterministic() {
    for kind in [UpdateKind::Vertex, UpdateKind::Edge] {
        let params = WorkloadParams {
            seed: 77,
            kind,
            regime: WeightRegime::Signed,
            ..WorkloadParams::default()
        };
        let a = generate(&params);
        let b = generate(&params);
        assert_eq!(a, b);
        assert_eq!(oracle_phi(&a.final_graph()), oracle_phi(&b.final_graph()));
        let other = generate(&WorkloadParams { seed: 78, ..params });
        assert_ne!(a.ops, other.ops);
    }
}

#[test]
fn nonneg_cycles_fit_approx_promise() {
    for seed in 0..50 {
        let params = WorkloadParams {
            n: 12,
            seed,
            updates: 30,
            ..WorkloadParams::default()
        };
        let g = generate(&params).final_graph();
        assert!(g
            .edges()
            .all(|e| e.w == 0.0 || (1.0..=100.0).contains(&e.w)));
        if let ExtWeight::Finite(x) = oracle_phi(&g) {
            assert!(x == 0.0 || (1.0..=1200.0).contains(&x));
        }
    }
}

#[test]
fn phi_matches_cycle_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let n = rng.gen_range(0..=10);
        let regime = if rng.gen_bool(0.5) {
            WeightRegime::NonNeg
        } else {
            WeightRegime::Signed
        };
        let m = rng.gen_range(0..=2 * n);
        let g = random_graph(&mut rng, n, m, regime, 20);
        let phi = oracle_phi(&g);
        match dfs_min_cycle(&g) {
            None => assert_eq!(phi, ExtWeight::PosInf),
            Some(x) if x < 0.0 => assert_eq!(phi, ExtWeight::NegInf),
            Some(x) => assert_eq!(phi, ExtWeight::Finite(x)),
        }
        for mu in [0.0, 1.0, 7.5, 40.0] {
            assert_eq!(oracle_threshold(&g, mu), phi < ExtWeight::Finite(mu));
        }
    }
}

#[test]
fn mpsp_oracle_edge_cases() {
    let g = common::graph(3, &[(0, 1, 2.0), (1, 2, 3.0)]);
    let pairs = [(0, 2), (2, 0), (1, 1)];
    assert_eq!(
        oracle_mpsp(&g, &[], &pairs),
        MpspAnswer::Distances(vec![
            ExtWeight::Finite(5.0),
            ExtWeight::PosInf,
            ExtWeight::ZERO
        ])
    );
    assert_eq!(
        oracle_mpsp(&g, &[0, 1, 2], &pairs),
        MpspAnswer::Distances(vec![ExtWeight::PosInf; 3])
    );
}
