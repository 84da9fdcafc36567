//! End-to-end sweep throughput at a reduced desk scale.

use criterion::{criterion_group, criterion_main, Criterion};
use ellstat::{sweep, BoxSpec, Statistic};

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("div2_x200_box10", |b| {
        b.iter(|| sweep(200, BoxSpec::new(10, 10), Statistic::Divisibility { m: 2 }).unwrap())
    });
    group.bench_function("cyclic_x200_box10", |b| {
        b.iter(|| sweep(200, BoxSpec::new(10, 10), Statistic::Cyclic).unwrap())
    });
    group.finish();
}

criterion_group!(sweeps, bench_sweep);
criterion_main!(sweeps);
