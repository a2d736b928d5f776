//! Acceptance suite: every closed-form result is held to its stated
//! tolerance against an independent Monte Carlo oracle, and the structural
//! checks run at full scale. One PASS line prints per criterion
//! (`cargo test --test acceptance -- --nocapture` to see them).

use errts_core::bartlett::{bartlett_q, q1_element, q2_element, MomentSet};
use errts_core::corrected::{block_bootstrap, default_block_len, fit_corrected};
use errts_core::error_models::{AdditiveError, ErrorModel, MultiplicativeError, NoiseDist};
use errts_core::forecast::{
    adjust_initials, error_free_mspe, forecast, monte_carlo_mspe, mspe, prediction_interval,
};
use errts_core::montecarlo::{covariance_experiment, simulate_ar, SimSpec};
use errts_core::naive::naive_limit_arp;
use errts_core::{fit_ls, fitted_equivalence_gap, ArModel, Series};
use std::time::Instant;

fn ar1(phi0: f64, phi1: f64, s2: f64) -> ArModel {
    ArModel::new(phi0, vec![phi1], s2).unwrap()
}

fn additive(sigma_e2: f64) -> ErrorModel {
    ErrorModel::Additive(AdditiveError::new(0.0, 1.0, sigma_e2).unwrap())
}

fn multiplicative(beta0: f64, sigma_u2: f64) -> ErrorModel {
    ErrorModel::Multiplicative(
        MultiplicativeError::new(beta0, sigma_u2, NoiseDist::Lognormal).unwrap(),
    )
}

/// Mean of the naive least-squares slope and of the corrected slope across
/// independent contaminated replicates.
fn attenuation_experiment(
    model: &ArModel,
    err: &ErrorModel,
    t: usize,
    reps: usize,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let p = model.p();
    let mut naive_sum = vec![0.0; p];
    let mut corrected_sum = vec![0.0; p];
    for r in 0..reps {
        let clean = simulate_ar(&SimSpec::new(model.clone(), t, seed + r as u64)).unwrap();
        let noisy = err.contaminate(&clean, seed ^ (r as u64 + 1));
        let naive = fit_ls(&noisy, p).unwrap();
        let corrected = fit_corrected(&noisy, p, err).unwrap();
        for i in 0..p {
            naive_sum[i] += naive.model.phi[i];
            corrected_sum[i] += corrected.fit.model.phi[i];
        }
    }
    (
        naive_sum.iter().map(|s| s / reps as f64).collect(),
        corrected_sum.iter().map(|s| s / reps as f64).collect(),
    )
}

#[test]
fn criterion_01_additive_ar1_attenuation() {
    let start = Instant::now();
    let model = ar1(0.0, 0.5, 1.0);
    let err = additive(1.0);
    let phi1_star = 2.0 / 7.0;
    let (naive, corrected) = attenuation_experiment(&model, &err, 20_000, 200, 10_000);
    assert!(
        (naive[0] - phi1_star).abs() < 0.02,
        "naive mean {} vs {phi1_star}",
        naive[0]
    );
    assert!(
        (corrected[0] - 0.5).abs() < 0.02,
        "corrected mean {}",
        corrected[0]
    );
    let dt = start.elapsed();
    assert!(dt.as_secs() < 60, "runtime {dt:?} exceeds 60 s");
    println!(
        "PASS criterion 1 (additive attenuation): naive {:.4} ~ {:.4}, corrected {:.4} ~ 0.5 [{dt:.2?}]",
        naive[0], phi1_star, corrected[0]
    );
}

#[test]
fn criterion_02_multiplicative_ar1_attenuation() {
    let start = Instant::now();
    let model = ar1(1.0, 0.5, 1.0);
    let err = multiplicative(2.0, 0.5);
    let phi1_star = 1.0 / 6.0;
    let (naive, corrected) = attenuation_experiment(&model, &err, 20_000, 200, 20_000);
    assert!(
        (naive[0] - phi1_star).abs() < 0.02,
        "naive mean {} vs {phi1_star}",
        naive[0]
    );
    assert!(
        (corrected[0] - 0.5).abs() < 0.03,
        "corrected mean {}",
        corrected[0]
    );
    let dt = start.elapsed();
    assert!(dt.as_secs() < 90, "runtime {dt:?} exceeds 90 s");
    println!(
        "PASS criterion 2 (multiplicative attenuation): naive {:.4} ~ {:.4}, corrected {:.4} ~ 0.5 [{dt:.2?}]",
        naive[0], phi1_star, corrected[0]
    );
}

#[test]
fn criterion_03_arp_naive_limits() {
    let start = Instant::now();
    let model = ArModel::new(1.0, vec![0.5, -0.3], 1.0).unwrap();
    let gammas = model.autocovariances(3).unwrap();
    let mu = model.mean();
    for (err, tag, seed) in [
        (additive(0.5), "additive", 31_000u64),
        (multiplicative(2.0, 0.5), "multiplicative", 32_000),
    ] {
        let lim = naive_limit_arp(2, &err, &gammas, mu).unwrap();
        let mut sums = [0.0; 2];
        let reps = 100;
        for r in 0..reps {
            let clean = simulate_ar(&SimSpec::new(model.clone(), 50_000, seed + r as u64)).unwrap();
            let noisy = err.contaminate(&clean, seed ^ (r as u64 + 1));
            let fit = errts_core::fit_ee(&noisy.autocov_summary(2).unwrap()).unwrap();
            for (sum, est) in sums.iter_mut().zip(&fit.model.phi) {
                *sum += est;
            }
        }
        for (i, sum) in sums.iter().enumerate() {
            let mean = sum / reps as f64;
            assert!(
                (mean - lim.phi_star[i]).abs() < 0.02,
                "{tag} phi*[{i}]: empirical {mean} vs closed form {}",
                lim.phi_star[i]
            );
        }
    }
    let dt = start.elapsed();
    assert!(dt.as_secs() < 180, "runtime {dt:?} exceeds 3 min");
    println!("PASS criterion 3 (AR(2) naive limits, both error models, +-0.02) [{dt:.2?}]");
}

#[test]
fn criterion_04_q_matrices() {
    let start = Instant::now();
    let t = 2000;
    let reps = 5000;

    // Error-free Bartlett covariance, 5% per element.
    let clean_model = ar1(0.0, 0.5, 1.0);
    let g0 = 4.0 / 3.0;
    let gamma = move |k: usize| g0 * 0.5f64.powi(k as i32);
    let emp = covariance_experiment(
        &SimSpec::new(clean_model.clone(), t, 41_000),
        &additive(0.0),
        1,
        reps,
    )
    .unwrap();
    for (j, k) in [(0usize, 0usize), (0, 1), (1, 1)] {
        let want = bartlett_q(gamma, 3.0, j, k, 1e-10).unwrap();
        let got = emp[(j, k)];
        assert!(
            ((got - want) / want).abs() < 0.05,
            "bartlett ({j},{k}): {got} vs {want}"
        );
    }

    // Q1 under additive error, 7% per element.
    let err1 = AdditiveError::new(0.0, 1.0, 1.0).unwrap();
    let emp1 = covariance_experiment(
        &SimSpec::new(clean_model, t, 42_000),
        &ErrorModel::Additive(err1.clone()),
        1,
        reps,
    )
    .unwrap();
    for (j, k) in [(0usize, 0usize), (0, 1), (1, 1)] {
        let want = q1_element(gamma, 3.0, j, k, &err1, 1e-10).unwrap();
        let got = emp1[(j, k)];
        assert!(
            ((got - want) / want).abs() < 0.07,
            "Q1 ({j},{k}): {got} vs {want}"
        );
    }

    // Q2 under multiplicative error, 10% per element.
    let model2 = ar1(1.0, 0.5, 1.0);
    let err2 = MultiplicativeError::new(2.0, 0.5, NoiseDist::Lognormal).unwrap();
    let emp2 = covariance_experiment(
        &SimSpec::new(model2.clone(), t, 43_000),
        &ErrorModel::Multiplicative(err2.clone()),
        1,
        reps,
    )
    .unwrap();
    let moments = MomentSet::gaussian(gamma, 2);
    for (j, k) in [(0usize, 0usize), (0, 1), (1, 1)] {
        let want = q2_element(gamma, 3.0, j, k, &err2, model2.mean(), &moments, 1e-10).unwrap();
        let got = emp2[(j, k)];
        assert!(
            ((got - want) / want).abs() < 0.10,
            "Q2 ({j},{k}): {got} vs {want}"
        );
    }
    let dt = start.elapsed();
    assert!(dt.as_secs() < 300, "runtime {dt:?} exceeds 5 min");
    println!("PASS criterion 4 (Bartlett 5%, Q1 7%, Q2 10% per element) [{dt:.2?}]");
}

#[test]
fn criterion_05_estimator_equivalence() {
    let start = Instant::now();
    let model = ar1(1.0, 0.5, 1.0);
    let mut max_gap: f64 = 0.0;
    for seed in 0..100u64 {
        let s = simulate_ar(&SimSpec::new(model.clone(), 10_000, 50_000 + seed)).unwrap();
        max_gap = max_gap.max(fitted_equivalence_gap(&s, 1).unwrap());
    }
    assert!(max_gap < 0.01, "max componentwise gap {max_gap}");
    let dt = start.elapsed();
    println!("PASS criterion 5 (LS vs EE gap < 0.01 over 100 seeds, max {max_gap:.5}) [{dt:.2?}]");
}

#[test]
fn criterion_06_mspe_closed_forms() {
    let start = Instant::now();
    let reps = 50_000;
    let cases = [
        (ar1(0.0, 0.5, 1.0), additive(1.0), "additive", 60_000u64),
        (
            ar1(1.0, 0.5, 1.0),
            multiplicative(2.0, 0.5),
            "multiplicative",
            61_000,
        ),
    ];
    for (model, err, tag, seed) in cases {
        for h in 1..=5 {
            let closed = mspe(&model, &err, h).unwrap();
            let mc = monte_carlo_mspe(&model, &err, h, reps, seed + h as u64).unwrap();
            assert!(
                ((mc - closed) / closed).abs() < 0.05,
                "{tag} h={h}: MC {mc} vs closed {closed}"
            );
        }
    }
    // Error-free reduction is exact at zero error variance.
    let model = ar1(0.3, 0.6, 1.7);
    for h in 1..=5 {
        let a = mspe(&model, &additive(0.0), h).unwrap();
        let m = mspe(&model, &multiplicative(1.0, 0.0), h).unwrap();
        let want = error_free_mspe(0.6, 1.7, h);
        assert_eq!(a, want);
        assert_eq!(m, want);
    }
    let dt = start.elapsed();
    println!("PASS criterion 6 (MSPE closed forms vs Monte Carlo, 5%; exact error-free reduction) [{dt:.2?}]");
}

#[test]
fn criterion_07_interval_coverage() {
    let start = Instant::now();
    use rand::SeedableRng;
    use rand_distr::Distribution;
    let model = ar1(0.0, 0.5, 1.0);
    let err = additive(1.0);
    let futures = 5000;
    let h_max = 5;
    let pes: Vec<f64> = (1..=h_max)
        .map(|h| mspe(&model, &err, h).unwrap())
        .collect();
    let mut hits = vec![0usize; h_max];
    for rep in 0..futures {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(70_000);
        rng.set_stream(rep as u64 + 1);
        let innov = rand_distr::Normal::new(0.0, 1.0).unwrap();
        let mut x = 0.0;
        for _ in 0..500 {
            x = 0.5 * x + innov.sample(&mut rng);
        }
        let hist = Series::new(vec![x]).unwrap();
        let noisy = err.contaminate_with_rng(&hist, &mut rng);
        let initials = adjust_initials(noisy.values(), &err);
        let points = forecast(&model, &initials, h_max).unwrap();
        let mut truth = x;
        for (h, point) in points.iter().enumerate() {
            truth = 0.5 * truth + innov.sample(&mut rng);
            let (lo, hi) = prediction_interval(*point, pes[h], 0.05).unwrap();
            if truth >= lo && truth <= hi {
                hits[h] += 1;
            }
        }
    }
    for (h, &count) in hits.iter().enumerate() {
        let coverage = count as f64 / futures as f64;
        assert!(
            (0.92..=0.98).contains(&coverage),
            "h={}: coverage {coverage}",
            h + 1
        );
    }
    let dt = start.elapsed();
    let cov: Vec<String> = hits
        .iter()
        .map(|&c| format!("{:.3}", c as f64 / futures as f64))
        .collect();
    println!(
        "PASS criterion 7 (95% interval coverage in [92%, 98%] at h<=5: {}) [{dt:.2?}]",
        cov.join(", ")
    );
}

#[test]
fn criterion_08_block_bootstrap() {
    let start = Instant::now();
    let t = 2000;
    let model = ar1(0.0, 0.5, 1.0);
    let err = additive(1.0);

    // Nested oracle: SD of the corrected slope across independent datasets.
    let reps = 1000;
    let mut phis = Vec::with_capacity(reps);
    for r in 0..reps {
        let clean = simulate_ar(&SimSpec::new(model.clone(), t, 80_000 + r as u64)).unwrap();
        let noisy = err.contaminate(&clean, 81_000 + r as u64);
        phis.push(fit_corrected(&noisy, 1, &err).unwrap().fit.model.phi[0]);
    }
    let mean = phis.iter().sum::<f64>() / reps as f64;
    let mc_sd =
        (phis.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (reps as f64 - 1.0)).sqrt();

    // One dataset, N = 1000 bootstrap replicates, b = ceil(T^{1/3}).
    let clean = simulate_ar(&SimSpec::new(model.clone(), t, 88_123)).unwrap();
    let noisy = err.contaminate(&clean, 88_124);
    let b = default_block_len(t);
    assert_eq!(b, 13);
    let boot = block_bootstrap(&noisy, 1, &err, b, 1000, 88_125, false).unwrap();
    let boot_se = boot.std_errors[1];
    assert!(
        ((boot_se - mc_sd) / mc_sd).abs() < 0.20,
        "bootstrap SE {boot_se} vs Monte Carlo SD {mc_sd}"
    );
    let dt = start.elapsed();
    assert!(dt.as_secs() < 300, "runtime {dt:?} exceeds 5 min");
    println!(
        "PASS criterion 8 (bootstrap SE {boot_se:.5} within 20% of nested MC SD {mc_sd:.5}) [{dt:.2?}]"
    );
}

#[test]
fn criterion_09_stationarity_grid() {
    let start = Instant::now();
    let n = 41;
    let band = 1e-6;
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            let phi1 = -2.0 + 4.0 * i as f64 / (n - 1) as f64;
            let phi2 = -2.0 + 4.0 * j as f64 / (n - 1) as f64;
            let b1 = phi1 + phi2 - 1.0;
            let b2 = phi2 - phi1 - 1.0;
            let b3 = phi2.abs() - 1.0;
            if b1.abs() <= band || b2.abs() <= band || b3.abs() <= band {
                continue; // boundary cell
            }
            let triangle = b1 < 0.0 && b2 < 0.0 && b3 < 0.0;
            let model = ArModel::new(0.0, vec![phi1, phi2], 1.0).unwrap();
            assert_eq!(
                model.is_stationary(),
                triangle,
                "disagreement at ({phi1}, {phi2})"
            );
            checked += 1;
        }
    }
    let dt = start.elapsed();
    println!(
        "PASS criterion 9 (AR(2) triangle vs companion roots on {checked} grid cells, 0 disagreements) [{dt:.2?}]"
    );
}
