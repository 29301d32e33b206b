use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lsc_bench::hkappa_tridiagonal;
use lsc_core::eigensolve::{eigvecs_inverse_iteration, tridiag::tridiag_eigenvalues};
use lsc_core::potentials::Potential;
use lsc_core::semiclassics::{harmonic_kappa_study, sigma_enumerate};

fn bisection(c: &mut Criterion) {
    let mut group = c.benchmark_group("bisection");
    for m in [250i64, 1000, 4000] {
        let (d, e) = hkappa_tridiagonal(0.05, m);
        group.bench_with_input(BenchmarkId::from_parameter(2 * m + 1), &(d, e), |b, (d, e)| {
            b.iter(|| tridiag_eigenvalues(black_box(d), black_box(e), 8))
        });
    }
    group.finish();
}

fn inverse_iteration(c: &mut Criterion) {
    let (d, e) = hkappa_tridiagonal(0.05, 1000);
    let lambdas = tridiag_eigenvalues(&d, &e, 8);
    c.bench_function("inverse_iteration/2001", |b| {
        b.iter(|| eigvecs_inverse_iteration(black_box(&d), black_box(&e), black_box(&lambdas)).unwrap())
    });
}

fn sigma(c: &mut Criterion) {
    let p = Potential::separable_double_well(3).unwrap();
    c.bench_function("sigma/double_well_3d/500", |b| b.iter(|| sigma_enumerate(black_box(&p), 500).unwrap()));
}

fn kappa_study(c: &mut Criterion) {
    let mut group = c.benchmark_group("kappa_study");
    group.sample_size(10);
    group.bench_function("n5", |b| {
        b.iter(|| harmonic_kappa_study(1.0, black_box(&[0.2, 0.1, 0.05, 0.025]), 5).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bisection, inverse_iteration, sigma, kappa_study);
criterion_main!(benches);
