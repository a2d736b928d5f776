//! Closed-form limits of the naive analysis that fits an AR model to the
//! surrogate series as if it were the truth.
//!
//! For AR(1) the limits have explicit attenuation factors `omega1` (additive)
//! and `omega2` (multiplicative). For general p the limits are matrix
//! expressions in the true autocovariances.

use crate::error::{Error, Result};
use crate::error_models::{AdditiveError, ErrorModel, MultiplicativeError};
use crate::linalg::Mat;
use crate::model::ArModel;

/// Probability limits of the naive estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct NaiveLimit {
    pub phi0_star: f64,
    pub phi_star: Vec<f64>,
    /// Limit of the naive innovation-variance estimator.
    pub var_eps_star: f64,
    /// Limits of the surrogate autocovariances gamma*_0..gamma*_p.
    pub gamma_star: Vec<f64>,
}

/// Additive-error attenuation factor
/// `omega1 = alpha1^2 s2 / (alpha1^2 s2 + sigma_e2 (1 - phi1^2))`.
pub fn omega1(phi1: f64, sigma_eps2: f64, alpha1: f64, sigma_e2: f64) -> Result<f64> {
    if phi1.abs() >= 1.0 {
        return Err(Error::NonStationary {
            max_modulus: phi1.abs(),
        });
    }
    let a2s = alpha1 * alpha1 * sigma_eps2;
    let denom = a2s + sigma_e2 * (1.0 - phi1 * phi1);
    if denom <= 0.0 {
        return Err(Error::InvalidParameter(
            "omega1 denominator must be positive".into(),
        ));
    }
    Ok(a2s / denom)
}

/// Multiplicative-error attenuation factor
/// `omega2 = {1 + sigma_u2 + (1 + phi1) sigma_u2 phi0^2 / ((1 - phi1) s2)}^-1`.
pub fn omega2(phi0: f64, phi1: f64, sigma_eps2: f64, sigma_u2: f64) -> Result<f64> {
    if phi1.abs() >= 1.0 {
        return Err(Error::NonStationary {
            max_modulus: phi1.abs(),
        });
    }
    if sigma_eps2 <= 0.0 {
        return Err(Error::InvalidParameter(
            "sigma_eps2 must be positive".into(),
        ));
    }
    let denom =
        1.0 + sigma_u2 + (1.0 + phi1) * sigma_u2 * phi0 * phi0 / ((1.0 - phi1) * sigma_eps2);
    Ok(1.0 / denom)
}

/// AR(1) + additive error:
/// `phi1* = phi1 w1`, `phi0* = (alpha0 + alpha1 phi0/(1-phi1)) (1 - phi1 w1)`,
/// and the naive variance estimator converges to
/// `gamma*_0 (1 - phi1*^2)`, the residual variance of the limiting lag-one
/// regression on the surrogate scale.
pub fn naive_limit_ar1_additive(model: &ArModel, err: &AdditiveError) -> Result<NaiveLimit> {
    let phi1 = require_ar1(model)?;
    let w1 = omega1(phi1, model.sigma_eps2, err.alpha1, err.sigma_e2)?;
    let phi1_star = phi1 * w1;
    let mu_star = err.alpha0 + err.alpha1 * model.phi0 / (1.0 - phi1);
    let phi0_star = mu_star * (1.0 - phi1 * w1);
    let gamma0 = model.sigma_eps2 / (1.0 - phi1 * phi1);
    let gamma_star = vec![
        err.alpha1 * err.alpha1 * gamma0 + err.sigma_e2,
        err.alpha1 * err.alpha1 * gamma0 * phi1,
    ];
    let var_eps_star = gamma_star[0] * (1.0 - phi1_star * phi1_star);
    Ok(NaiveLimit {
        phi0_star,
        phi_star: vec![phi1_star],
        var_eps_star,
        gamma_star,
    })
}

/// AR(1) + multiplicative error:
/// `phi1* = phi1 w2`, `phi0* = beta0 phi0 (1 - w2 phi1)/(1 - phi1)`, and the
/// naive variance estimator converges to `gamma*_0 (1 - phi1*^2)`.
pub fn naive_limit_ar1_multiplicative(
    model: &ArModel,
    err: &MultiplicativeError,
) -> Result<NaiveLimit> {
    let phi1 = require_ar1(model)?;
    let w2 = omega2(model.phi0, phi1, model.sigma_eps2, err.sigma_u2)?;
    let phi1_star = phi1 * w2;
    let phi0_star = err.beta0 * model.phi0 * (1.0 - w2 * phi1) / (1.0 - phi1);
    let s2 = model.sigma_eps2;
    let gamma0 = s2 / (1.0 - phi1 * phi1);
    let b2 = err.beta0 * err.beta0;
    let mu = model.mean();
    let gamma_star = vec![
        b2 * ((err.sigma_u2 + 1.0) * gamma0 + err.sigma_u2 * mu * mu),
        b2 * gamma0 * phi1,
    ];
    let var_eps_star = gamma_star[0] - gamma_star[1] * gamma_star[1] / gamma_star[0];
    Ok(NaiveLimit {
        phi0_star,
        phi_star: vec![phi1_star],
        var_eps_star,
        gamma_star,
    })
}

/// General-p naive limits from the true autocovariances `gammas[0..=p]` and
/// the true mean.
///
/// Additive: `phi* = alpha1^2 (alpha1^2 Gamma + sigma_e2 I)^-1 gamma`,
/// `phi0* = (1 - sum phi*) (alpha0 + alpha1 mu)`,
/// `sigma_eps2* = alpha1^2 gamma0 + sigma_e2 - alpha1^4 gamma' (...)^-1 gamma`.
///
/// Multiplicative: `phi* = {Gamma + sigma_u2 (gamma0 + mu^2) I}^-1 gamma`,
/// `phi0* = beta0 (1 - sum phi*) mu`, with the matching variance expression.
pub fn naive_limit_arp(p: usize, err: &ErrorModel, gammas: &[f64], mu: f64) -> Result<NaiveLimit> {
    if p == 0 {
        return Err(Error::InvalidParameter("lag order must be positive".into()));
    }
    if gammas.len() < p + 1 {
        return Err(Error::InvalidParameter(format!(
            "need gamma_0..gamma_{p}, got {} values",
            gammas.len()
        )));
    }
    let gamma0 = gammas[0];
    let gamma_vec: Vec<f64> = gammas[1..=p].to_vec();
    let big_gamma = Mat::toeplitz(&gammas[..p]);

    match err {
        ErrorModel::Additive(a) => {
            let a2 = a.alpha1 * a.alpha1;
            let mut m = Mat::zeros(p);
            for i in 0..p {
                for j in 0..p {
                    m[(i, j)] = a2 * big_gamma[(i, j)];
                }
                m[(i, i)] += a.sigma_e2;
            }
            let base = m.solve_conditioned(&gamma_vec, 1e12)?;
            let phi_star: Vec<f64> = base.iter().map(|v| a2 * v).collect();
            let mu_star = a.alpha0 + a.alpha1 * mu;
            let phi0_star = (1.0 - phi_star.iter().sum::<f64>()) * mu_star;
            let quad: f64 = gamma_vec.iter().zip(&base).map(|(g, b)| g * b).sum();
            let var_eps_star = a2 * gamma0 + a.sigma_e2 - a2 * a2 * quad;
            let mut gamma_star = vec![a2 * gamma0 + a.sigma_e2];
            gamma_star.extend(gamma_vec.iter().map(|g| a2 * g));
            Ok(NaiveLimit {
                phi0_star,
                phi_star,
                var_eps_star,
                gamma_star,
            })
        }
        ErrorModel::Multiplicative(me) => {
            let b2 = me.beta0 * me.beta0;
            let infl = me.sigma_u2 * (gamma0 + mu * mu);
            let mut m = Mat::zeros(p);
            for i in 0..p {
                for j in 0..p {
                    m[(i, j)] = big_gamma[(i, j)];
                }
                m[(i, i)] += infl;
            }
            let phi_star = m.solve_conditioned(&gamma_vec, 1e12)?;
            let phi0_star = me.beta0 * (1.0 - phi_star.iter().sum::<f64>()) * mu;
            let quad: f64 = gamma_vec.iter().zip(&phi_star).map(|(g, b)| g * b).sum();
            let var_eps_star =
                b2 * (me.sigma_u2 + 1.0) * gamma0 + b2 * me.sigma_u2 * mu * mu - b2 * quad;
            let mut gamma_star = vec![b2 * ((me.sigma_u2 + 1.0) * gamma0 + me.sigma_u2 * mu * mu)];
            gamma_star.extend(gamma_vec.iter().map(|g| b2 * g));
            Ok(NaiveLimit {
                phi0_star,
                phi_star,
                var_eps_star,
                gamma_star,
            })
        }
    }
}

fn require_ar1(model: &ArModel) -> Result<f64> {
    if model.p() != 1 {
        return Err(Error::InvalidParameter(format!(
            "AR(1) formula called with p = {}",
            model.p()
        )));
    }
    model.require_stationary()?;
    Ok(model.phi[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error_models::NoiseDist;

    fn ar1(phi0: f64, phi1: f64, s2: f64) -> ArModel {
        ArModel::new(phi0, vec![phi1], s2).unwrap()
    }

    #[test]
    fn omega1_cases() {
        assert_eq!(omega1(0.5, 1.0, 1.0, 0.0).unwrap(), 1.0);
        assert!((omega1(0.5, 1.0, 1.0, 1.0).unwrap() - 1.0 / 1.75).abs() < 1e-14);
        assert!((omega1(0.5, 1.0, 2.0, 3.0).unwrap() - 0.64).abs() < 1e-14);
        assert!(omega1(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn omega2_cases() {
        assert_eq!(omega2(5.0, 0.5, 1.0, 0.0).unwrap(), 1.0);
        assert!((omega2(0.0, 0.3, 1.0, 0.5).unwrap() - 1.0 / 1.5).abs() < 1e-14);
        assert!((omega2(1.0, 0.5, 1.0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!(omega2(0.0, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn additive_identity_error_recovers_model() {
        let m = ar1(1.0, 0.5, 1.0);
        let lim = naive_limit_ar1_additive(&m, &AdditiveError::identity()).unwrap();
        assert!((lim.phi_star[0] - 0.5).abs() < 1e-14);
        assert!((lim.phi0_star - 1.0).abs() < 1e-14);
        assert!((lim.var_eps_star - 1.0).abs() < 1e-14);
    }

    #[test]
    fn additive_hand_evaluated_case() {
        // phi0=0, phi1=0.5, s2=1, alpha=(0,1), sigma_e2=1 -> w1=4/7.
        let m = ar1(0.0, 0.5, 1.0);
        let e = AdditiveError::new(0.0, 1.0, 1.0).unwrap();
        let lim = naive_limit_ar1_additive(&m, &e).unwrap();
        assert!((lim.phi_star[0] - 2.0 / 7.0).abs() < 1e-14);
        assert!(lim.phi0_star.abs() < 1e-14);
        // gamma*_0 (1 - phi1*^2) = (7/3)(45/49) = 15/7; equivalently the
        // residual decomposition 3/49 + (1 + 4/49) + 1.
        assert!((lim.var_eps_star - 15.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn multiplicative_hand_evaluated_case() {
        // phi0=1, phi1=0.5, s2=1, beta0=2, sigma_u2=0.5 -> w2=1/3.
        let m = ar1(1.0, 0.5, 1.0);
        let e = MultiplicativeError::new(2.0, 0.5, NoiseDist::Lognormal).unwrap();
        let lim = naive_limit_ar1_multiplicative(&m, &e).unwrap();
        assert!((lim.phi_star[0] - 1.0 / 6.0).abs() < 1e-14);
        // beta0 phi0 (1 - w2 phi1)/(1 - phi1) = 2 * (5/6) / 0.5 = 10/3.
        assert!((lim.phi0_star - 10.0 / 3.0).abs() < 1e-12);
        // gamma*_0 = 16, phi1* = 1/6: 16 (1 - 1/36) = 140/9.
        assert!((lim.var_eps_star - 140.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn multiplicative_identity_limit() {
        let m = ar1(1.0, 0.5, 1.0);
        let e = MultiplicativeError::new(1.0, 0.0, NoiseDist::Lognormal).unwrap();
        let lim = naive_limit_ar1_multiplicative(&m, &e).unwrap();
        assert!((lim.phi_star[0] - 0.5).abs() < 1e-14);
        assert!((lim.phi0_star - 1.0).abs() < 1e-14);
        assert!((lim.var_eps_star - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arp_reduces_to_ar1_formulas() {
        let m = ar1(0.4, 0.6, 1.3);
        let gammas = m.autocovariances(2).unwrap();
        let e = AdditiveError::new(0.7, 1.4, 0.8).unwrap();
        let full = naive_limit_ar1_additive(&m, &e).unwrap();
        let gen = naive_limit_arp(1, &ErrorModel::Additive(e), &gammas, m.mean()).unwrap();
        assert!((full.phi_star[0] - gen.phi_star[0]).abs() < 1e-12);
        assert!((full.phi0_star - gen.phi0_star).abs() < 1e-12);
        assert!((full.var_eps_star - gen.var_eps_star).abs() < 1e-12);

        let me = MultiplicativeError::new(1.9, 0.35, NoiseDist::Lognormal).unwrap();
        let m2 = ar1(1.0, 0.5, 1.0);
        let g2 = m2.autocovariances(2).unwrap();
        let full2 = naive_limit_ar1_multiplicative(&m2, &me).unwrap();
        let gen2 = naive_limit_arp(1, &ErrorModel::Multiplicative(me), &g2, m2.mean()).unwrap();
        assert!((full2.phi_star[0] - gen2.phi_star[0]).abs() < 1e-12);
        assert!((full2.phi0_star - gen2.phi0_star).abs() < 1e-12);
        assert!((full2.var_eps_star - gen2.var_eps_star).abs() < 1e-12);
    }

    #[test]
    fn beta0_does_not_move_phi_star() {
        let m = ArModel::new(1.0, vec![0.5, -0.3], 1.0).unwrap();
        let gammas = m.autocovariances(3).unwrap();
        for b0 in [0.5, 1.0, 3.0] {
            let e = MultiplicativeError::new(b0, 0.0, NoiseDist::Lognormal).unwrap();
            let lim =
                naive_limit_arp(2, &ErrorModel::Multiplicative(e), &gammas, m.mean()).unwrap();
            assert!((lim.phi_star[0] - 0.5).abs() < 1e-12);
            assert!((lim.phi_star[1] + 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha0_moves_only_phi0_star() {
        let m = ar1(0.8, 0.4, 1.0);
        let mut seen_phi0 = Vec::new();
        let mut seen_phi1 = Vec::new();
        let mut seen_var = Vec::new();
        for a0 in [-1.0, 0.0, 1.0] {
            let e = AdditiveError::new(a0, 1.0, 0.6).unwrap();
            let lim = naive_limit_ar1_additive(&m, &e).unwrap();
            seen_phi0.push(lim.phi0_star);
            seen_phi1.push(lim.phi_star[0]);
            seen_var.push(lim.var_eps_star);
        }
        assert!(seen_phi0.windows(2).all(|w| w[0] != w[1]));
        assert!(seen_phi1.windows(2).all(|w| w[0] == w[1]));
        assert!(seen_var.windows(2).all(|w| w[0] == w[1]));
    }
}
