use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use haarspec::moments::{build_real_moment_matrix, estimate_moment_operator, Ensemble};

fn exact_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_real_moment_matrix");
    group.sample_size(20);
    for (d, t) in [(3u64, 3u64), (4, 4), (2, 8)] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("d{d}_t{t}")), &(d, t), |b, &(d, t)| {
            b.iter(|| build_real_moment_matrix(black_box(d), black_box(t), 4096).unwrap())
        });
    }
    group.finish();
}

fn trace_power(c: &mut Criterion) {
    let rho = build_real_moment_matrix(3, 4, 4096).unwrap();
    c.bench_function("trace_power_m3_n81", |b| b.iter(|| black_box(&rho).trace_power(3)));
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_moment_operator");
    group.sample_size(10);
    group.bench_function("d3_t3_n20k_w4", |b| {
        b.iter(|| {
            estimate_moment_operator(3, 3, 20_000, 7, 4, Ensemble::RealHaar, 4096).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, exact_matrix, trace_power, monte_carlo);
criterion_main!(benches);
