//! Criterion benchmarks for the hot numerical kernels: eigensolves, matrix
//! exponentials, norm evaluations, and full bound scans.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uqsl_core::channels::{amplitude_damping, channel_trajectory, AmplitudeDampingParams};
use uqsl_core::entropy::{alpha_purity_quadrature_oracle, spectrum_unified_entropy, EntropyParams};
use uqsl_core::linalg::{linspace, matrix_exponential, BlochParams};
use uqsl_core::manybody::{SpinChainConfig, XxzEvolution};
use uqsl_core::nonhermitian::PTQubitParams;
use uqsl_core::qsl::prefix_series;
use uqsl_core::random;
use uqsl_core::C64;

fn bench_hermitian_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigen");
    for dim in [4usize, 16, 64] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random::random_hermitian(dim, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &m, |b, m| {
            b.iter(|| m.hermitian_eigen().unwrap())
        });
    }
    group.finish();
}

fn bench_matrix_exponential(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_exponential");
    let pt = PTQubitParams::new(1.0, 2.0, BlochParams::new(0.5, 0.7, 0.7).unwrap())
        .unwrap()
        .hamiltonian();
    let generator = pt.h_tilde().scale(C64::new(0.0, -2.5));
    group.bench_function("pt_qubit_2x2", |b| {
        b.iter(|| matrix_exponential(&generator).unwrap())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dense = random::random_ginibre(16, &mut rng);
    group.bench_function("dense_16x16", |b| {
        b.iter(|| matrix_exponential(&dense).unwrap())
    });
    group.finish();
}

fn bench_trace_norm(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let m = random::random_ginibre(16, &mut rng);
    c.bench_function("trace_norm_gram_16x16", |b| b.iter(|| m.trace_norm()));
}

fn bench_entropy(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rho = random::random_density(8, &mut rng);
    let spectrum = rho.eigenvalues();
    let params = EntropyParams::generic(0.5, 0.5).unwrap();
    c.bench_function("unified_entropy_spectrum_d8", |b| {
        b.iter(|| spectrum_unified_entropy(&spectrum, &params))
    });
    c.bench_function("alpha_purity_quadrature_d8", |b| {
        b.iter(|| alpha_purity_quadrature_oracle(&rho, 0.5).unwrap())
    });
}

fn bench_scans(c: &mut Criterion) {
    let bloch = BlochParams::new(0.5, 0.785, 0.785).unwrap();
    let params = AmplitudeDampingParams::new(1.0, bloch).unwrap();
    let channel = amplitude_damping(&params);
    let rho0 = params.initial_state();
    let times = linspace(0.0, 6.0, 501);
    c.bench_function("channel_trajectory_501", |b| {
        b.iter(|| channel_trajectory(&channel, &rho0, &times).unwrap())
    });

    let traj = channel_trajectory(&channel, &rho0, &times).unwrap();
    let entropy = EntropyParams::generic(0.5, 0.5).unwrap();
    c.bench_function("prefix_series_501", |b| {
        b.iter(|| prefix_series(&traj, &entropy).unwrap())
    });
}

fn bench_xxz(c: &mut Criterion) {
    let cfg = SpinChainConfig::new(6, 1.0, 0.5, 0.5, 1).unwrap();
    let evolution = XxzEvolution::new(cfg).unwrap();
    c.bench_function("xxz_l6_reduced_sample", |b| {
        b.iter(|| {
            let state = evolution.reduced_at(1.7).unwrap();
            let speed = evolution.reduced_speed_at(1.7);
            (state, speed)
        })
    });
}

criterion_group!(
    benches,
    bench_hermitian_eigen,
    bench_matrix_exponential,
    bench_trace_norm,
    bench_entropy,
    bench_scans,
    bench_xxz
);
criterion_main!(benches);
