//! Hot per-prime kernels: context construction, per-curve statistics,
//! class-table builds, and the window counting primitives.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ellstat::{
    build_class_table, curve_stats, group_structure, sigma_rho, z_set_count, PrimeContext,
};

fn bench_context(c: &mut Criterion) {
    c.bench_function("prime_context_1009", |b| {
        b.iter(|| PrimeContext::new(black_box(1009)).unwrap())
    });
}

fn bench_curve_stats(c: &mut Criterion) {
    let ctx = PrimeContext::new(1009).unwrap();
    c.bench_function("curve_stats_1009", |b| {
        b.iter(|| curve_stats(&ctx, black_box(17), black_box(29)).unwrap())
    });
    c.bench_function("group_structure_1009", |b| {
        b.iter(|| group_structure(&ctx, black_box(17), black_box(29)).unwrap())
    });
}

fn bench_class_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("class_table");
    group.sample_size(20);
    for p in [101u64, 499, 1009] {
        let ctx = PrimeContext::new(p).unwrap();
        group.bench_function(format!("build_p{p}"), |b| b.iter(|| build_class_table(&ctx)));
    }
    group.finish();
}

fn bench_windows(c: &mut Criterion) {
    let ctx = PrimeContext::new(1009).unwrap();
    c.bench_function("z_set_count_1009", |b| {
        b.iter(|| z_set_count(&ctx, black_box(7), black_box(100)))
    });
    c.bench_function("sigma_rho_1009", |b| b.iter(|| sigma_rho(&ctx, black_box(504))));
}

criterion_group!(kernels, bench_context, bench_curve_stats, bench_class_table, bench_windows);
criterion_main!(kernels);
