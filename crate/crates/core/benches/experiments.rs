//! Replicate-level workloads benchmarked under both execution modes:
//!
//! ```text
//! cargo bench -p errts-core                         # rayon (default)
//! cargo bench -p errts-core --no-default-features   # sequential fallback
//! ```
//!
//! Outputs are bit-identical between the two; only the wall time changes.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use errts_core::corrected::block_bootstrap;
use errts_core::error_models::{AdditiveError, ErrorModel, MultiplicativeError, NoiseDist};
use errts_core::forecast::monte_carlo_mspe;
use errts_core::montecarlo::{covariance_experiment, naive_limit_experiment, simulate_ar, SimSpec};
use errts_core::ArModel;

fn ar1() -> ArModel {
    ArModel::new(1.0, vec![0.5], 1.0).unwrap()
}

fn bench_simulate(c: &mut Criterion) {
    let spec = SimSpec::new(ar1(), 20_000, 7);
    c.bench_function("simulate_ar/T=20000", |b| {
        b.iter(|| simulate_ar(std::hint::black_box(&spec)).unwrap())
    });
}

fn bench_naive_experiment(c: &mut Criterion) {
    let err = ErrorModel::Additive(AdditiveError::new(0.0, 1.0, 0.5).unwrap());
    let mut group = c.benchmark_group("naive_limit_experiment");
    for reps in [64usize, 256] {
        let spec = SimSpec::new(ar1(), 2000, 11);
        group.bench_with_input(BenchmarkId::from_parameter(reps), &reps, |b, &reps| {
            b.iter(|| naive_limit_experiment(&spec, &err, reps).unwrap())
        });
    }
    group.finish();
}

fn bench_covariance_experiment(c: &mut Criterion) {
    let err = ErrorModel::Multiplicative(
        MultiplicativeError::new(2.0, 0.5, NoiseDist::Lognormal).unwrap(),
    );
    let spec = SimSpec::new(ar1(), 2000, 13);
    c.bench_function("covariance_experiment/reps=1000", |b| {
        b.iter(|| covariance_experiment(&spec, &err, 1, 1000).unwrap())
    });
}

fn bench_block_bootstrap(c: &mut Criterion) {
    let err = ErrorModel::Additive(AdditiveError::new(0.0, 1.0, 0.5).unwrap());
    let clean = simulate_ar(&SimSpec::new(ar1(), 2000, 17)).unwrap();
    let noisy = err.contaminate(&clean, 18);
    c.bench_function("block_bootstrap/N=500", |b| {
        b.iter(|| block_bootstrap(&noisy, 1, &err, 13, 500, 19, false).unwrap())
    });
}

fn bench_monte_carlo_mspe(c: &mut Criterion) {
    let err = ErrorModel::Additive(AdditiveError::new(0.0, 1.0, 1.0).unwrap());
    let model = ar1();
    c.bench_function("monte_carlo_mspe/reps=10000", |b| {
        b.iter(|| monte_carlo_mspe(&model, &err, 3, 10_000, 23).unwrap())
    });
}

criterion_group!(
    benches,
    bench_simulate,
    bench_naive_experiment,
    bench_covariance_experiment,
    bench_block_bootstrap,
    bench_monte_carlo_mspe
);
criterion_main!(benches);
