//! Bias-corrected estimation from surrogate series.
//!
//! The surrogate moments are transformed so that they share probability
//! limits with the latent-series moments, then the estimating equations are
//! solved on the transformed moments. Uncertainty comes either from a block
//! bootstrap over the surrogate series or from the sandwich covariance
//! `G Q G' / T` with `G` obtained by central finite differences.

use crate::error::{Error, Result};
use crate::error_models::ErrorModel;
use crate::estimate::{fit_ee, ArFit, MIN_OBS_PER_LAG};
use crate::linalg::Mat;
use crate::series::{AutocovSummary, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A corrected fit: the estimating-equation solution on corrected moments.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedFit {
    pub fit: ArFit,
    /// Corrected moments (mu_tilde, gamma_tilde_k) the fit was solved on.
    pub corrected_summary: AutocovSummary,
    /// Surrogate moments the correction started from.
    pub surrogate_summary: AutocovSummary,
    pub error_model: ErrorModel,
    /// Set when the corrected coefficient vector is not stationary.
    pub nonstationary_warning: bool,
    /// Number of surrogate observations.
    pub t: usize,
}

/// Transforms surrogate moments into corrected moments.
///
/// Additive: `mu~ = (mu*_hat - alpha0)/alpha1`,
/// `gamma~_0 = (gamma*_0 - sigma_e2)/alpha1^2`, `gamma~_k = gamma*_k/alpha1^2`.
///
/// Multiplicative: `mu~ = mu*_hat/beta0`,
/// `gamma~_0 = gamma*_0/((1+sigma_u2) beta0^2) - sigma_u2 mu~^2/(sigma_u2+1)`,
/// `gamma~_k = gamma*_k/beta0^2`, with `mu~` standing in for the unknown mean.
pub fn corrected_moments(surrogate: &AutocovSummary, err: &ErrorModel) -> Result<AutocovSummary> {
    let (mu, gammas) = match err {
        ErrorModel::Additive(a) => {
            let a2 = a.alpha1 * a.alpha1;
            let mu = (surrogate.mu_hat - a.alpha0) / a.alpha1;
            let mut gammas = Vec::with_capacity(surrogate.gammas.len());
            gammas.push((surrogate.gamma0() - a.sigma_e2) / a2);
            gammas.extend(surrogate.gamma_vec().iter().map(|g| g / a2));
            (mu, gammas)
        }
        ErrorModel::Multiplicative(m) => {
            let b2 = m.beta0 * m.beta0;
            let mu = surrogate.mu_hat / m.beta0;
            let mut gammas = Vec::with_capacity(surrogate.gammas.len());
            gammas.push(
                surrogate.gamma0() / ((1.0 + m.sigma_u2) * b2)
                    - m.sigma_u2 * mu * mu / (m.sigma_u2 + 1.0),
            );
            gammas.extend(surrogate.gamma_vec().iter().map(|g| g / b2));
            (mu, gammas)
        }
    };
    if gammas[0] <= 0.0 {
        return Err(Error::Overcorrection { gamma0: gammas[0] });
    }
    AutocovSummary::new(mu, gammas)
}

/// Corrected fit of an AR(p) model to a surrogate series.
pub fn fit_corrected(surrogate: &Series, p: usize, err: &ErrorModel) -> Result<CorrectedFit> {
    let t = surrogate.len();
    if t < MIN_OBS_PER_LAG * p.max(1) {
        return Err(Error::TooShort {
            len: t,
            required: MIN_OBS_PER_LAG * p.max(1),
        });
    }
    let surrogate_summary = surrogate.autocov_summary(p)?;
    let corrected = corrected_moments(&surrogate_summary, err)?;
    let fit = fit_ee(&corrected)?;
    let nonstationary_warning = !fit.model.is_stationary();
    Ok(CorrectedFit {
        fit,
        corrected_summary: corrected,
        surrogate_summary,
        error_model: err.clone(),
        nonstationary_warning,
        t,
    })
}

/// Block-bootstrap variance of the corrected estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub n_reps: usize,
    pub block_len: usize,
    /// Variances of (phi0, phi_1..phi_p, sigma_eps2) across replicates.
    pub variances: Vec<f64>,
    /// Standard errors, elementwise sqrt of `variances`.
    pub std_errors: Vec<f64>,
    /// Replicates that failed to refit and were skipped.
    pub failed: usize,
    /// Per-replicate parameter vectors, retained on request.
    pub replicates: Option<Vec<Vec<f64>>>,
}

/// Default block length `ceil(T^{1/3})`.
pub fn default_block_len(t: usize) -> usize {
    (t as f64).powf(1.0 / 3.0).ceil() as usize
}

/// Resamples contiguous blocks of the surrogate series, refits the corrected
/// estimator on each replicate, and reports the per-parameter variance
/// `(1/N) sum_n (theta^(n) - mean)^2`.
///
/// Block starts are drawn uniformly from `{0..T-b}`; blocks are appended
/// until the replicate reaches length T and then truncated. Replicate `n`
/// draws from its own stream keyed by `(seed, n)`, so the result does not
/// depend on evaluation order. Replicates whose refit fails (for example a
/// resample that overcorrects to a non-positive variance) are skipped; more
/// than 10% failures is an error.
pub fn block_bootstrap(
    surrogate: &Series,
    p: usize,
    err: &ErrorModel,
    block_len: usize,
    n_reps: usize,
    seed: u64,
    keep_replicates: bool,
) -> Result<BootstrapResult> {
    let t = surrogate.len();
    if block_len == 0 || block_len > t {
        return Err(Error::InvalidParameter(format!(
            "block length must lie in 1..={t}, got {block_len}"
        )));
    }
    if n_reps < 2 {
        return Err(Error::InvalidParameter(
            "bootstrap needs at least 2 replicates".into(),
        ));
    }
    let values = surrogate.values();
    let results: Vec<Option<Vec<f64>>> = crate::exec::keyed_map(n_reps, |n| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64 + 1);
        let mut resampled = Vec::with_capacity(t + block_len);
        while resampled.len() < t {
            let start = rng.gen_range(0..=t - block_len);
            resampled.extend_from_slice(&values[start..start + block_len]);
        }
        resampled.truncate(t);
        let series = Series::new(resampled).ok()?;
        let fit = fit_corrected(&series, p, err).ok()?;
        Some(fit.fit.param_vec())
    });

    let kept: Vec<&Vec<f64>> = results.iter().flatten().collect();
    let failed = n_reps - kept.len();
    if failed * 10 > n_reps {
        return Err(Error::BootstrapFailures {
            failed,
            total: n_reps,
        });
    }
    let dim = p + 2;
    let n = kept.len() as f64;
    let mut variances = vec![0.0; dim];
    for d in 0..dim {
        let col: Vec<f64> = kept.iter().map(|r| r[d]).collect();
        if col.iter().all(|&v| v == col[0]) {
            continue; // degenerate resampling, e.g. block_len == T
        }
        let mean = crate::exec::pairwise_mean(&col);
        let sq: Vec<f64> = col.iter().map(|v| (v - mean) * (v - mean)).collect();
        variances[d] = crate::exec::pairwise_sum(&sq) / n;
    }
    let std_errors = variances.iter().map(|v| v.sqrt()).collect();
    Ok(BootstrapResult {
        n_reps,
        block_len,
        variances,
        std_errors,
        failed,
        replicates: keep_replicates.then(|| kept.into_iter().cloned().collect()),
    })
}

/// Sandwich covariance `G Q G' / T` of the corrected coefficients, where `G`
/// is the Jacobian of the surrogate-moments -> phi~ map with respect to
/// `(gamma*_0, gamma*_1..gamma*_p)`, computed by central finite differences
/// with step `1e-5 * max(|gamma*_j|, gamma*_0)` per component.
pub fn sandwich_cov(fit: &CorrectedFit, q_matrix: &Mat) -> Result<Mat> {
    let p = fit.fit.model.p();
    let dim = p + 1;
    if q_matrix.n != dim {
        return Err(Error::InvalidParameter(format!(
            "Q must be {dim}x{dim}, got {}x{}",
            q_matrix.n, q_matrix.n
        )));
    }
    let norm = q_matrix.norm_1().max(f64::MIN_POSITIVE);
    let mut asym: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            asym = asym.max((q_matrix[(i, j)] - q_matrix[(j, i)]).abs());
        }
    }
    if asym > 1e-6 * norm {
        return Err(Error::AsymmetricMatrix { asymmetry: asym });
    }

    let base = &fit.surrogate_summary;
    let phi_of = |gammas: &[f64]| -> Result<Vec<f64>> {
        let summary = AutocovSummary::new(base.mu_hat, gammas.to_vec())?;
        let corrected = corrected_moments(&summary, &fit.error_model)?;
        Ok(fit_ee(&corrected)?.model.phi)
    };

    let mut g = vec![vec![0.0; dim]; p];
    for d in 0..dim {
        let scale = base.gammas[d].abs().max(base.gamma0());
        let h = 1e-5 * scale;
        let mut hi = base.gammas.clone();
        let mut lo = base.gammas.clone();
        hi[d] += h;
        lo[d] -= h;
        let phi_hi = phi_of(&hi)?;
        let phi_lo = phi_of(&lo)?;
        for row in 0..p {
            g[row][d] = (phi_hi[row] - phi_lo[row]) / (2.0 * h);
        }
    }

    // G Q G' / T
    let mut gq = vec![vec![0.0; dim]; p];
    for r in 0..p {
        for c in 0..dim {
            gq[r][c] = (0..dim).map(|m| g[r][m] * q_matrix[(m, c)]).sum();
        }
    }
    let mut out = Mat::zeros(p);
    for r in 0..p {
        for c in 0..p {
            out[(r, c)] = (0..dim).map(|m| gq[r][m] * g[c][m]).sum::<f64>() / fit.t as f64;
        }
    }
    Ok(out)
}
