use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use confgeom::conformal::christoffel_shift_residual;
use confgeom::fixtures;
use confgeom::geometry::metric_derivative_identities;
use confgeom::grid;

fn christoffel_shift(c: &mut Criterion) {
    let pair = fixtures::stereographic_pair();
    let mut group = c.benchmark_group("christoffel_shift");
    for n in [16usize, 64] {
        let pts = pair.source.domain().lattice(n);
        group.bench_with_input(BenchmarkId::new("sequential", n * n), &pts, |b, pts| {
            b.iter(|| grid::try_map_seq(pts, |&(u, v)| christoffel_shift_residual(&pair, u, v)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("default", n * n), &pts, |b, pts| {
            b.iter(|| grid::try_map(pts, |&(u, v)| christoffel_shift_residual(&pair, u, v)).unwrap())
        });
    }
    group.finish();
}

fn metric_identities(c: &mut Criterion) {
    let sphere = fixtures::unit_sphere();
    let pts = sphere.domain.lattice(64);
    let mut group = c.benchmark_group("metric_identities");
    group.bench_function("sequential", |b| {
        b.iter(|| grid::try_map_seq(black_box(&pts), |&(u, v)| metric_derivative_identities(&sphere, u, v)).unwrap())
    });
    group.bench_function("default", |b| {
        b.iter(|| grid::try_map(black_box(&pts), |&(u, v)| metric_derivative_identities(&sphere, u, v)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, christoffel_shift, metric_identities);
criterion_main!(benches);
