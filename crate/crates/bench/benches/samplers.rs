use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dyson_core::dominance::{check_dominance_exact, sprinkle_laws};
use dyson_core::estimators::{replica_thresholds, Proxy, Side};
use dyson_core::models::{sample_bernoulli, FkChain};
use dyson_core::{EdgeProbFn, Interval, Seed};

fn bernoulli(c: &mut Criterion) {
    let f = EdgeProbFn::dyson(1.0, 1.5).unwrap();
    let mut group = c.benchmark_group("sample_bernoulli");
    for n in [10_000u64, 100_000, 1_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| sample_bernoulli(Interval::with_len(n), &f, Seed::new(1, 0)))
        });
    }
    group.finish();
}

fn clusters(c: &mut Criterion) {
    let g = sample_bernoulli(
        Interval::with_len(100_000),
        &EdgeProbFn::dyson(0.3, 1.5).unwrap(),
        Seed::new(2, 0),
    );
    c.bench_function("clusters/100000", |b| b.iter(|| black_box(&g).clusters()));
}

fn fk_sweep(c: &mut Criterion) {
    let f = EdgeProbFn::dyson(0.5, 1.5).unwrap();
    let mut chain = FkChain::new(Interval::with_len(256), &f, 2.0, Seed::new(3, 0)).unwrap();
    c.bench_function("fk_sweep/256", |b| b.iter(|| chain.sweep()));
}

fn thresholds(c: &mut Criterion) {
    c.bench_function("replica_thresholds/4096x16", |b| {
        b.iter(|| {
            replica_thresholds(
                Side::TwoSided,
                1.5,
                4096,
                0.6,
                16,
                &Proxy::Span,
                Seed::new(4, 0),
            )
            .unwrap()
        })
    });
}

fn dominance(c: &mut Criterion) {
    let (lo, hi) = sprinkle_laws(Interval::with_len(4), 0.8, 0.2, 1.5, 2.0).unwrap();
    c.bench_function("check_dominance_exact/6 pairs", |b| {
        b.iter(|| check_dominance_exact(black_box(&lo), black_box(&hi)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bernoulli, clusters, fk_sweep, thresholds, dominance
}
criterion_main!(benches);
