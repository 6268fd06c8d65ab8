//! Benchmarks for the numerical kernels: decomposition, propagation,
//! tracking, coarse-graining.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use decoh_bench::{random_hermitian, random_state, Lcg};
use decoh_core::dynamics::{density_rate, propagator, schmidt_rates, track_schmidt, EvolutionConfig};
use decoh_core::hilbert::{hermitian_eigh, partial_trace_state, svd, DensityOperator, Subsystem};
use decoh_core::schmidt::schmidt_decompose;
use decoh_core::zwanzig::{channel_run, entropy, ZwanzigProjector};
use decoh_core::ToleranceConfig;

fn bench_linalg(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let mut lcg = Lcg::new(7);
    let h32 = random_hermitian(&mut lcg, 32);
    c.bench_function("eigh_32", |b| {
        b.iter(|| hermitian_eigh(black_box(&h32), &tol).unwrap())
    });

    let m = random_state(&mut lcg, 16, 24).amplitude_matrix();
    c.bench_function("svd_16x24", |b| b.iter(|| svd(black_box(&m)).unwrap()));

    let h16 = random_hermitian(&mut lcg, 16);
    c.bench_function("propagator_16", |b| {
        b.iter(|| propagator(black_box(&h16), 0.01, &tol).unwrap())
    });
}

fn bench_schmidt(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let mut lcg = Lcg::new(13);
    let psi = random_state(&mut lcg, 8, 8);
    c.bench_function("schmidt_decompose_8x8", |b| {
        b.iter(|| schmidt_decompose(black_box(&psi), &tol).unwrap())
    });

    let h = random_hermitian(&mut lcg, 16);
    c.bench_function("schmidt_rates_4x4", |b| {
        let psi4 = random_state(&mut lcg, 4, 4);
        b.iter(|| schmidt_rates(black_box(&psi4), &h, &tol))
    });
    c.bench_function("density_rate_4x4", |b| {
        let psi4 = random_state(&mut lcg, 4, 4);
        b.iter(|| density_rate(black_box(&psi4), &h, &tol).unwrap())
    });
}

fn bench_dynamics(c: &mut Criterion) {
    let mut lcg = Lcg::new(29);
    let h = random_hermitian(&mut lcg, 4);
    let psi = random_state(&mut lcg, 2, 2);
    c.bench_function("track_schmidt_2x2_1k_steps", |b| {
        let cfg = EvolutionConfig::new(h.clone(), 1.0, 1e-3).unwrap();
        b.iter(|| track_schmidt(black_box(&psi), &cfg, false).unwrap())
    });
}

fn bench_zwanzig(c: &mut Criterion) {
    let tol = ToleranceConfig::default();
    let mut lcg = Lcg::new(43);
    let psi = random_state(&mut lcg, 4, 4);
    let rho = DensityOperator::from_pure(psi.amplitudes());
    c.bench_function("entropy_16", |b| {
        b.iter(|| entropy(black_box(&rho), &tol).unwrap())
    });

    let h = random_hermitian(&mut lcg, 16);
    c.bench_function("channel_run_4x4_100_segments", |b| {
        let cfg = EvolutionConfig::new(h.clone(), 1.0, 0.01).unwrap();
        b.iter(|| {
            channel_run(
                black_box(&psi),
                &cfg,
                ZwanzigProjector::Separating,
                0.01,
            )
            .unwrap()
        })
    });

    c.bench_function("partial_trace_8x8", |b| {
        let big = random_state(&mut lcg, 8, 8);
        b.iter(|| partial_trace_state(black_box(&big), Subsystem::A))
    });
}

criterion_group!(
    benches,
    bench_linalg,
    bench_schmidt,
    bench_dynamics,
    bench_zwanzig
);
criterion_main!(benches);
