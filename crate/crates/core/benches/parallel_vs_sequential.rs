//! Each workload timed twice: through the rayon helpers and inside
//! `run_sequential`. Set `MAYER_ZETA_THREADS` to cap the pool.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mayer_core::operator::{matrix_monomial, DiscDomain};
use mayer_core::parallel::{init_thread_pool, map_slice, run_sequential};
use mayer_core::spectral::{det_finite, orbit_sum_capped, orbit_sum_completed, CompletedOptions, DetKind, OrbitWeight};
use mayer_core::ComplexPoint;

fn both<F: Fn()>(c: &mut Criterion, group: &str, f: F) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::from_parameter("parallel"), |b| b.iter(&f));
    g.bench_function(BenchmarkId::from_parameter("sequential"), |b| b.iter(|| run_sequential(&f)));
    g.finish();
}

fn matrix_assembly(c: &mut Criterion) {
    let disc = DiscDomain::default();
    both(c, "matrix_monomial_m64", || {
        black_box(matrix_monomial(ComplexPoint::new(1.0, 0.5), 64, &disc).unwrap());
    });
}

fn orbit_sums(c: &mut Criterion) {
    let s = ComplexPoint::new(1.5, 0.0);
    both(c, "orbit_sum_capped_n3_d60", || {
        black_box(orbit_sum_capped(s, 3, OrbitWeight::Trace, 60).unwrap());
    });
    both(c, "orbit_sum_completed_n4", || {
        black_box(orbit_sum_completed(s, 4, OrbitWeight::Trace, CompletedOptions::default_for(4)).unwrap());
    });
}

fn grid_scan(c: &mut Criterion) {
    let grid: Vec<ComplexPoint> = (0..16).map(|k| ComplexPoint::new(0.5, 8.0 + 0.2 * k as f64)).collect();
    both(c, "det_grid_16_points_m32", || {
        black_box(map_slice(&grid, |&s| det_finite(s, DetKind::MinusSquare, 32).unwrap().value));
    });
}

fn setup() -> Criterion {
    init_thread_pool();
    Criterion::default()
}

criterion_group! {
    name = benches;
    config = setup();
    targets = matrix_assembly, orbit_sums, grid_scan
}
criterion_main!(benches);
