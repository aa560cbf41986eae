use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use dyncycle_bench::{vertex_updates, Update};
use dyncycle_core::harness::WeightRegime;
use dyncycle_core::{
    ApproxMinCycle, DynamicExactConfig, DynamicMinCycle, NegCycleDetector, ThresholdDetector,
};

const UPDATES: usize = 200;

/// Replays every update through `step` on a fresh structure per iteration.
fn replay<S>(
    c: &mut Criterion,
    group: &str,
    regime: WeightRegime,
    mut fresh: impl FnMut(usize) -> S,
    mut step: impl FnMut(&mut S, &Update),
) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    for n in [50, 200] {
        let ups = vertex_updates(n, UPDATES, 4.0, regime, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &ups, |b, ups| {
            b.iter_batched(
                || fresh(n),
                |mut s| {
                    for u in ups {
                        step(&mut s, u);
                    }
                    s
                },
                BatchSize::LargeInput,
            )
        });
    }
    g.finish();
}

fn threshold(c: &mut Criterion) {
    replay(
        c,
        "threshold",
        WeightRegime::NonNeg,
        |n| ThresholdDetector::new(n, 150.0).unwrap(),
        |s, u| {
            s.vertex_update(u.v, &u.incoming, &u.outgoing).unwrap();
            s.cycle_below_threshold();
        },
    );
}

fn approx(c: &mut Criterion) {
    replay(
        c,
        "approx",
        WeightRegime::NonNeg,
        |n| ApproxMinCycle::new(n, 0.5, 1.0, 100.0 * n as f64).unwrap(),
        |s, u| {
            s.vertex_update(u.v, &u.incoming, &u.outgoing).unwrap();
            s.estimate();
        },
    );
}

fn negcycle(c: &mut Criterion) {
    replay(
        c,
        "negcycle",
        WeightRegime::Signed,
        NegCycleDetector::new,
        |s, u| {
            s.vertex_update(u.v, &u.incoming, &u.outgoing).unwrap();
            s.has_negative_cycle();
        },
    );
}

fn exact_mincycle(c: &mut Criterion) {
    replay(
        c,
        "exact_mincycle",
        WeightRegime::NonNeg,
        |n| DynamicMinCycle::new(n, DynamicExactConfig::default()).unwrap(),
        |s, u| {
            s.vertex_update(u.v, &u.incoming, &u.outgoing).unwrap();
            s.query().unwrap();
        },
    );
}

criterion_group!(benches, threshold, approx, negcycle, exact_mincycle);
criterion_main!(benches);
