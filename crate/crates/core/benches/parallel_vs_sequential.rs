use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use periodpoly::codes::{build_code, weight_distribution_full, FULL_BUDGET};
use periodpoly::ffield::build_field;
use periodpoly::periods::{period_counts_with, CountMethod};
use periodpoly::quadpart::solve_d2_with;
use periodpoly::Strategy;
use std::hint::black_box;

fn strategies() -> Vec<(&'static str, Strategy)> {
    let mut v = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    v.push(("parallel", Strategy::Parallel));
    v
}

fn period_counts(c: &mut Criterion) {
    let f = build_field(3, 8).unwrap();
    let mut g = c.benchmark_group("period_counts_3^8_e16");
    for method in [CountMethod::Direct, CountMethod::PowerTable] {
        for (name, strategy) in strategies() {
            g.bench_with_input(BenchmarkId::new(format!("{method:?}"), name), &strategy, |b, s| {
                b.iter(|| period_counts_with(black_box(&f), 16, method, *s).unwrap())
            });
        }
    }
    g.finish();
}

fn code_enumeration(c: &mut Criterion) {
    let f = build_field(3, 8).unwrap();
    let code = build_code(3, 1, 8, 16).unwrap();
    let mut g = c.benchmark_group("full_code_enumeration_3^8_N16");
    g.sample_size(10);
    for (name, strategy) in strategies() {
        g.bench_function(name, |b| b.iter(|| weight_distribution_full(&f, black_box(&code), FULL_BUDGET, strategy).unwrap()));
    }
    g.finish();
}

fn partitions(c: &mut Criterion) {
    let mut g = c.benchmark_group("d2_partition_29^10");
    g.sample_size(10);
    for (name, strategy) in strategies() {
        g.bench_function(name, |b| b.iter(|| solve_d2_with(black_box(29), 10, strategy).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, period_counts, code_enumeration, partitions);
criterion_main!(benches);
