use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mathieu_bench::{random_admissible, random_su2};
use mathieu_core::admissible::reduce_su2;

fn admissible_moments(c: &mut Criterion) {
    let h = random_admissible(2, 1, 5, 3);
    let mut group = c.benchmark_group("admissible_power_moment");
    for p in [4u32, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, &p| b.iter(|| h.power_moment(black_box(p))));
    }
    group.finish();
}

fn su2_pipelines(c: &mut Criterion) {
    let f = random_su2(4, 11);
    let mut group = c.benchmark_group("su2_moment_p4");
    group.bench_function("direct", |b| b.iter(|| f.power_moment_direct(black_box(4))));
    group.bench_function("combinatorial", |b| b.iter(|| f.power_moment_combinatorial(black_box(4))));
    group.bench_function("reduced", |b| b.iter(|| reduce_su2(&f).power_moment(black_box(4))));
    group.finish();
}

criterion_group!(benches, admissible_moments, su2_pipelines);
criterion_main!(benches);
