use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mathieu_bench::{random_admissible, random_su2};
use mathieu_core::quadrature::{numeric_moment_admissible, su2_euler_moment, QuadratureSpec};

fn quadrature(c: &mut Criterion) {
    let spec = QuadratureSpec::default();
    let h = random_admissible(2, 1, 4, 5);
    let f = random_su2(3, 5);
    c.bench_function("torus_cube_p4", |b| b.iter(|| numeric_moment_admissible(&h, black_box(4), &spec).unwrap()));
    c.bench_function("euler_p3", |b| b.iter(|| su2_euler_moment(&f, black_box(3), &spec).unwrap()));
}

criterion_group!(benches, quadrature);
criterion_main!(benches);
