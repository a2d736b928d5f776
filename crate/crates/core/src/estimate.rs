//! AR(p) fitting by least squares and by the autocovariance estimating
//! equations. The two estimators are asymptotically equivalent; the gap
//! between them on a given sample is exposed for testing.

use crate::error::{Error, Result};
use crate::model::ArModel;
use crate::series::{AutocovSummary, Series};

/// Condition-number ceiling for the Toeplitz solve.
pub const MAX_CONDITION: f64 = 1e12;

/// Minimum observations per lag required before fitting.
pub const MIN_OBS_PER_LAG: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    LeastSquares,
    EstimatingEquations,
}

/// A fitted AR model together with the moments that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ArFit {
    pub model: ArModel,
    pub method: FitMethod,
    pub summary: AutocovSummary,
}

impl ArFit {
    /// (phi0, phi_1..phi_p, sigma_eps2) flattened for componentwise comparison.
    pub fn param_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.model.p() + 2);
        v.push(self.model.phi0);
        v.extend_from_slice(&self.model.phi);
        v.push(self.model.sigma_eps2);
        v
    }
}

/// Least-squares fit: minimizes `sum_t {(X_t - mu_hat) - (X~_{t-1} - mu_hat)' phi}^2`
/// over t = p+1..T, with every mean replaced by the single global `mu_hat`.
/// Then `phi0 = mu_hat (1 - sum phi_j)` and `sigma_eps2 = S(phi_hat)/(T-p)`.
pub fn fit_ls(s: &Series, p: usize) -> Result<ArFit> {
    if p == 0 {
        return Err(Error::InvalidParameter("lag order must be positive".into()));
    }
    let t = s.len();
    if t < MIN_OBS_PER_LAG * p {
        return Err(Error::TooShort {
            len: t,
            required: MIN_OBS_PER_LAG * p,
        });
    }
    if s.is_constant() {
        return Err(Error::ConstantSeries);
    }
    let x = s.values();
    let mu = s.mean_hat();

    // Normal equations on centered regressors.
    let mut xtx = crate::linalg::Mat::zeros(p);
    let mut xty = vec![0.0; p];
    for ti in p..t {
        let y = x[ti] - mu;
        for i in 0..p {
            let xi = x[ti - 1 - i] - mu;
            xty[i] += xi * y;
            for j in i..p {
                let xj = x[ti - 1 - j] - mu;
                xtx[(i, j)] += xi * xj;
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            xtx[(i, j)] = xtx[(j, i)];
        }
    }
    let phi = xtx.solve(&xty).map_err(|e| match e {
        Error::SingularSystem => Error::SingularSystem,
        other => other,
    })?;

    let mut ssr = 0.0;
    for ti in p..t {
        let mut pred = 0.0;
        for (j, &c) in phi.iter().enumerate() {
            pred += c * (x[ti - 1 - j] - mu);
        }
        let r = (x[ti] - mu) - pred;
        ssr += r * r;
    }
    let sigma_eps2 = ssr / (t - p) as f64;
    let phi0 = mu * (1.0 - phi.iter().sum::<f64>());

    let summary = s.autocov_summary(p)?;
    let model = ArModel::new(phi0, phi, sigma_eps2)?;
    Ok(ArFit {
        model,
        method: FitMethod::LeastSquares,
        summary,
    })
}

/// Estimating-equation fit: solves
/// `phi = Gamma_hat^{-1} gamma_hat`,
/// `phi0 = (1 - sum phi_i) mu_hat`,
/// `sigma_eps2 = gamma_hat_0 - 2 phi' gamma_hat + phi' Gamma_hat phi`.
pub fn fit_ee(summary: &AutocovSummary) -> Result<ArFit> {
    let gamma_mat = summary.toeplitz();
    let gamma_vec = summary.gamma_vec();
    let phi = gamma_mat.solve_conditioned(gamma_vec, MAX_CONDITION)?;
    let phi0 = (1.0 - phi.iter().sum::<f64>()) * summary.mu_hat;
    let quad: f64 = gamma_mat
        .mul_vec(&phi)
        .iter()
        .zip(&phi)
        .map(|(a, b)| a * b)
        .sum();
    let cross: f64 = phi.iter().zip(gamma_vec).map(|(a, b)| a * b).sum();
    let sigma_eps2 = summary.gamma0() - 2.0 * cross + quad;
    if sigma_eps2 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "estimating equations give negative innovation variance {sigma_eps2}"
        )));
    }
    let model = ArModel::new(phi0, phi, sigma_eps2)?;
    Ok(ArFit {
        model,
        method: FitMethod::EstimatingEquations,
        summary: summary.clone(),
    })
}

/// Max absolute componentwise difference between the least-squares and
/// estimating-equation parameter vectors on the same series.
pub fn fitted_equivalence_gap(s: &Series, p: usize) -> Result<f64> {
    let ls = fit_ls(s, p)?;
    let ee = fit_ee(&s.autocov_summary(p)?)?;
    Ok(ls
        .param_vec()
        .iter()
        .zip(ee.param_vec())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Kurtosis ratio `m4 / m2^2` of the least-squares residuals, used when a
/// non-Gaussian `eta` is wanted in the autocovariance-covariance formula.
pub fn residual_eta(s: &Series, fit: &ArFit) -> f64 {
    let p = fit.model.p();
    let x = s.values();
    let mu = s.mean_hat();
    let mut res = Vec::with_capacity(x.len().saturating_sub(p));
    for ti in p..x.len() {
        let mut pred = 0.0;
        for (j, &c) in fit.model.phi.iter().enumerate() {
            pred += c * (x[ti - 1 - j] - mu);
        }
        res.push((x[ti] - mu) - pred);
    }
    let n = res.len() as f64;
    let m2 = res.iter().map(|r| r * r).sum::<f64>() / n;
    let m4 = res.iter().map(|r| r.powi(4)).sum::<f64>() / n;
    m4 / (m2 * m2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;

    #[test]
    fn ee_solves_hand_checked_system() {
        // p=1, mu=2, gammas=[4/3, 2/3]: phi1=0.5, phi0=1, sigma2=1.
        let sm = AutocovSummary::new(2.0, vec![4.0 / 3.0, 2.0 / 3.0]).unwrap();
        let fit = fit_ee(&sm).unwrap();
        assert!((fit.model.phi[0] - 0.5).abs() < 1e-14);
        assert!((fit.model.phi0 - 1.0).abs() < 1e-14);
        assert!((fit.model.sigma_eps2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ee_white_noise_summary() {
        let sm = AutocovSummary::new(0.7, vec![1.0, 0.0, 0.0]).unwrap();
        let fit = fit_ee(&sm).unwrap();
        assert!(fit.model.phi.iter().all(|&c| c.abs() < 1e-14));
        assert!((fit.model.phi0 - 0.7).abs() < 1e-14);
        assert!((fit.model.sigma_eps2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ee_satisfies_defining_equations() {
        let sm = AutocovSummary::new(1.3, vec![2.0, 0.9, 0.2, -0.1]).unwrap();
        let fit = fit_ee(&sm).unwrap();
        let phi = &fit.model.phi;
        // Residual of each displayed equation.
        let lhs = sm.toeplitz().mul_vec(phi);
        for (a, b) in lhs.iter().zip(sm.gamma_vec()) {
            assert!((a - b).abs() < 1e-10);
        }
        let phi0 = (1.0 - phi.iter().sum::<f64>()) * sm.mu_hat;
        assert!((fit.model.phi0 - phi0).abs() < 1e-12);
    }

    #[test]
    fn phi0_identity_exact_for_ee() {
        let sm = AutocovSummary::new(-0.4, vec![1.5, 0.4, 0.1]).unwrap();
        let fit = fit_ee(&sm).unwrap();
        let expect = sm.mu_hat * (1.0 - fit.model.phi.iter().sum::<f64>());
        assert_eq!(fit.model.phi0, expect);
    }

    #[test]
    fn constant_series_rejected() {
        let s = Series::new(vec![2.0; 50]).unwrap();
        assert_eq!(fit_ls(&s, 1), Err(Error::ConstantSeries));
    }

    #[test]
    fn short_series_rejected() {
        let s = Series::new(vec![1.0, 2.0, 3.0, 2.0]).unwrap();
        assert!(matches!(fit_ls(&s, 1), Err(Error::TooShort { .. })));
    }

    #[test]
    fn ill_conditioned_toeplitz_reported() {
        // Perfectly correlated lags make Gamma singular.
        let sm = AutocovSummary::new(0.0, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            fit_ee(&sm),
            Err(Error::IllConditioned { .. }) | Err(Error::SingularSystem)
        ));
    }
}
