use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hypercore::montecarlo::{mc_global_with, mc_local_with, McPlan};
use hypercore::sweep::run_sweep_with;
use hypercore::{
    exact_global, Execution, HypergraphParams, LocalPredicate, LocalQuery, Method, Scope, Seed, SweepSpec,
};

const MODES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn mc_local_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_local");
    group.sample_size(10);
    let query = LocalQuery::new(20, 3, 20.0 / 1140.0, 1).unwrap();
    let plan = McPlan::new(20_000, Seed(1)).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "u20"), &exec, |b, &exec| {
            b.iter(|| {
                mc_local_with(black_box(&query), LocalPredicate::Connectivity, &plan, 0..u64::MAX, exec)
            })
        });
    }
    group.finish();
}

fn mc_global_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_global");
    group.sample_size(10);
    let params = HypergraphParams::new(24, 3, 20.0 / 2024.0, 2).unwrap();
    let plan = McPlan::new(20_000, Seed(2)).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "v24"), &exec, |b, &exec| {
            b.iter(|| mc_global_with(black_box(&params), &plan, 0..u64::MAX, exec))
        });
    }
    group.finish();
}

fn sweep_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let spec = SweepSpec {
        scope: Scope::Global,
        k: 3,
        r: 2,
        overhead: 1.2,
        e_range: 3..=20,
        methods: vec![Method::InterleavedLower, Method::InterleavedUpper, Method::Mc],
        trials: 2000,
        seed: Seed(3),
    };
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "k3r2"), &exec, |b, &exec| {
            b.iter(|| run_sweep_with(black_box(spec.clone()), exec))
        });
    }
    group.finish();
}

fn oracle_bench(c: &mut Criterion) {
    // exact_global picks its mode from the feature set; this tracks the
    // default build only
    let params = HypergraphParams::new(6, 3, 0.3, 2).unwrap();
    c.bench_function("exact_global/v6", |b| b.iter(|| exact_global(black_box(&params))));
}

criterion_group!(benches, mc_local_bench, mc_global_bench, sweep_bench, oracle_bench);
criterion_main!(benches);
