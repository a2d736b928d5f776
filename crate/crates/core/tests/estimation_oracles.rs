//! Simulation checks of the two estimators: both recover generating
//! parameters and agree with each other as T grows.

use errts_core::montecarlo::{simulate_ar, SimSpec};
use errts_core::{fit_ee, fit_ls, fitted_equivalence_gap, ArModel};

#[test]
fn white_noise_ls_fit() {
    let model = ArModel::new(0.0, vec![0.0], 1.0).unwrap();
    let s = simulate_ar(&SimSpec::new(model, 50_000, 1)).unwrap();
    let fit = fit_ls(&s, 1).unwrap();
    assert!(fit.model.phi[0].abs() < 0.02, "phi1 = {}", fit.model.phi[0]);
    assert!(
        fit.model.sigma_eps2 > 0.97 && fit.model.sigma_eps2 < 1.03,
        "sigma2 = {}",
        fit.model.sigma_eps2
    );
}

#[test]
fn ar1_ls_fit_recovers_parameters() {
    let model = ArModel::new(1.0, vec![0.5], 1.0).unwrap();
    let s = simulate_ar(&SimSpec::new(model, 50_000, 2)).unwrap();
    let fit = fit_ls(&s, 1).unwrap();
    assert!((fit.model.phi[0] - 0.5).abs() < 0.02);
    assert!((fit.model.phi0 - 1.0).abs() < 0.05);
}

#[test]
fn ar2_ls_fit_recovers_parameters() {
    let model = ArModel::new(0.0, vec![0.5, -0.3], 1.0).unwrap();
    let s = simulate_ar(&SimSpec::new(model, 50_000, 3)).unwrap();
    let fit = fit_ls(&s, 2).unwrap();
    assert!((fit.model.phi[0] - 0.5).abs() < 0.02);
    assert!((fit.model.phi[1] + 0.3).abs() < 0.02);
}

#[test]
fn equivalence_gap_shrinks_with_t() {
    let model = ArModel::new(1.0, vec![0.5], 1.0).unwrap();
    let s_small = simulate_ar(&SimSpec::new(model.clone(), 10_000, 4)).unwrap();
    let gap_small = fitted_equivalence_gap(&s_small, 1).unwrap();
    assert!(gap_small < 0.01, "gap at T=10000: {gap_small}");

    let s_large = simulate_ar(&SimSpec::new(model, 100_000, 5)).unwrap();
    let gap_large = fitted_equivalence_gap(&s_large, 1).unwrap();
    assert!(gap_large < 0.003, "gap at T=100000: {gap_large}");

    let noise = ArModel::new(0.0, vec![0.0], 1.0).unwrap();
    let s_noise = simulate_ar(&SimSpec::new(noise, 10_000, 6)).unwrap();
    assert!(fitted_equivalence_gap(&s_noise, 1).unwrap() < 0.01);
}

#[test]
fn both_estimators_consistent_over_replicates() {
    // Mean absolute error per coefficient below 0.03 across 200 replicates.
    let model = ArModel::new(0.3, vec![0.5, -0.3], 1.0).unwrap();
    let reps = 200;
    let mut mae_ls = [0.0f64; 2];
    let mut mae_ee = [0.0f64; 2];
    for r in 0..reps {
        let s = simulate_ar(&SimSpec::new(model.clone(), 5000, 100 + r)).unwrap();
        let ls = fit_ls(&s, 2).unwrap();
        let ee = fit_ee(&s.autocov_summary(2).unwrap()).unwrap();
        for i in 0..2 {
            mae_ls[i] += (ls.model.phi[i] - model.phi[i]).abs();
            mae_ee[i] += (ee.model.phi[i] - model.phi[i]).abs();
        }
    }
    for i in 0..2 {
        mae_ls[i] /= reps as f64;
        mae_ee[i] /= reps as f64;
        assert!(mae_ls[i] < 0.03, "LS MAE[{i}] = {}", mae_ls[i]);
        assert!(mae_ee[i] < 0.03, "EE MAE[{i}] = {}", mae_ee[i]);
    }
}

#[test]
fn aic_selects_generating_order() {
    // AR(2) data: the chosen lag is 2 in at least 80% of seeded trials.
    let model = ArModel::new(0.0, vec![0.5, -0.3], 1.0).unwrap();
    let trials = 100;
    let mut hits = 0;
    for r in 0..trials {
        let s = simulate_ar(&SimSpec::new(model.clone(), 2000, 3000 + r)).unwrap();
        if errts_core::select::select_lag(&s, 5).unwrap() == 2 {
            hits += 1;
        }
    }
    assert!(hits >= 80, "selected p=2 in {hits}/{trials} trials");
}

#[test]
fn aic_stays_small_on_white_noise() {
    let model = ArModel::new(0.0, vec![0.0], 1.0).unwrap();
    let trials = 100;
    let mut small = 0;
    for r in 0..trials {
        let s = simulate_ar(&SimSpec::new(model.clone(), 2000, 900 + r)).unwrap();
        if errts_core::select::select_lag(&s, 5).unwrap() <= 2 {
            small += 1;
        }
    }
    assert!(small >= 80, "selected p<=2 in {small}/{trials} trials");
}
