//! Stationarity screening and lag selection.
//!
//! The unit-root test regresses the first difference on a constant, the
//! lagged level, and lagged differences, and converts the t-statistic on the
//! lagged level into a p-value through MacKinnon's response-surface
//! coefficients for the constant-only case. Lag order defaults to
//! `floor((T-1)^{1/3})`. AIC ranks candidate lag orders by the Gaussian
//! conditional likelihood of the naive AR fit plus `2p`.

use crate::error::{Error, Result};
use crate::estimate::fit_ls;
use crate::linalg::Mat;
use crate::series::Series;
use crate::stats::norm_cdf;

/// Outcome of the augmented unit-root regression with constant.
#[derive(Debug, Clone, PartialEq)]
pub struct AdfResult {
    /// t-statistic on the lagged level.
    pub statistic: f64,
    /// Unit-root p-value in (0, 1).
    pub p_value: f64,
    /// Number of lagged differences included.
    pub lags_used: usize,
    /// Critical values at 1%, 5%, 10% for this sample size.
    pub critical_values: [f64; 3],
}

/// Smallest differencing order that passes the unit-root screen, with the
/// test outcome at that order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenResult {
    pub diff_order: u32,
    pub adf: AdfResult,
    /// Set when no order up to `max_diff` rejected at 10%.
    pub warning: bool,
}

/// Minimum series length accepted by the test.
pub const ADF_MIN_LEN: usize = 15;

/// Default lag rule `floor((T-1)^{1/3})`.
pub fn adf_default_lags(t: usize) -> usize {
    // Guard against cube roots landing just under an integer.
    ((t as f64 - 1.0).cbrt() + 1e-9).floor() as usize
}

/// Augmented Dickey-Fuller test with constant and the default lag rule.
pub fn adf_test(s: &Series) -> Result<AdfResult> {
    adf_test_with_lags(s, adf_default_lags(s.len()))
}

/// Same test with an explicit number of lagged differences.
pub fn adf_test_with_lags(s: &Series, lags: usize) -> Result<AdfResult> {
    let t = s.len();
    if t < ADF_MIN_LEN {
        return Err(Error::TooShort {
            len: t,
            required: ADF_MIN_LEN,
        });
    }
    if s.is_constant() {
        return Err(Error::ConstantSeries);
    }
    let y = s.values();
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let n = dy.len() - lags; // usable observations
    let k = lags + 2; // constant + level + lagged differences
    if n <= k + 1 {
        return Err(Error::TooShort {
            len: t,
            required: k + lags + 3,
        });
    }

    // Regression of dy_t on [1, y_{t-1}, dy_{t-1}, ..., dy_{t-lags}].
    let mut xtx = Mat::zeros(k);
    let mut xty = vec![0.0; k];
    let mut row = vec![0.0; k];
    for i in lags..dy.len() {
        row[0] = 1.0;
        row[1] = y[i];
        for l in 0..lags {
            row[2 + l] = dy[i - 1 - l];
        }
        let target = dy[i];
        for a in 0..k {
            xty[a] += row[a] * target;
            for b in a..k {
                xtx[(a, b)] += row[a] * row[b];
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            xtx[(a, b)] = xtx[(b, a)];
        }
    }
    let beta = xtx.solve(&xty)?;

    let mut ssr = 0.0;
    for i in lags..dy.len() {
        let mut pred = beta[0] + beta[1] * y[i];
        for l in 0..lags {
            pred += beta[2 + l] * dy[i - 1 - l];
        }
        let r = dy[i] - pred;
        ssr += r * r;
    }
    let sigma2 = ssr / (n - k) as f64;
    let xtx_inv = xtx.inverse()?;
    let se = (sigma2 * xtx_inv[(1, 1)]).sqrt();
    if se == 0.0 || !se.is_finite() {
        return Err(Error::SingularSystem);
    }
    let statistic = beta[1] / se;
    let p_value = mackinnon_p_value(statistic).clamp(1e-6, 1.0 - 1e-6);
    Ok(AdfResult {
        statistic,
        p_value,
        lags_used: lags,
        critical_values: mackinnon_critical_values(n),
    })
}

// MacKinnon response-surface coefficients, constant-only case: the p-value
// is Phi(polynomial(statistic)), with separate small-p and large-p branches.
const TAU_STAR: f64 = -1.61;
const TAU_MIN: f64 = -18.83;
const TAU_MAX: f64 = 2.74;
const TAU_SMALLP: [f64; 3] = [2.1659, 1.4412, 3.8269e-2];
const TAU_LARGEP: [f64; 4] = [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2];

fn mackinnon_p_value(stat: f64) -> f64 {
    if stat > TAU_MAX {
        return 1.0;
    }
    if stat < TAU_MIN {
        return 0.0;
    }
    let z = if stat <= TAU_STAR {
        poly_ascending(&TAU_SMALLP, stat)
    } else {
        poly_ascending(&TAU_LARGEP, stat)
    };
    norm_cdf(z)
}

fn poly_ascending(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

// Finite-sample critical values, constant-only case: each level expands in
// powers of 1/T.
const CV_1PCT: [f64; 4] = [-3.43035, -6.5393, -16.786, -79.433];
const CV_5PCT: [f64; 4] = [-2.86154, -2.8903, -4.234, -40.040];
const CV_10PCT: [f64; 4] = [-2.56677, -1.5384, -2.809, 0.0];

fn mackinnon_critical_values(n: usize) -> [f64; 3] {
    let t = n as f64;
    let eval = |c: &[f64; 4]| c[0] + c[1] / t + c[2] / (t * t) + c[3] / (t * t * t);
    [eval(&CV_1PCT), eval(&CV_5PCT), eval(&CV_10PCT)]
}

/// AIC of the naive AR(p) fit: `-2 loglik + 2p` with the Gaussian conditional
/// density over `t = p+1..T` and the maximum-likelihood variance.
pub fn aic(s: &Series, p: usize) -> Result<f64> {
    let fit = fit_ls(s, p)?;
    let x = s.values();
    let mu = s.mean_hat();
    let n = x.len() - p;
    let mut ssr = 0.0;
    for ti in p..x.len() {
        let mut pred = 0.0;
        for (j, &c) in fit.model.phi.iter().enumerate() {
            pred += c * (x[ti - 1 - j] - mu);
        }
        let r = (x[ti] - mu) - pred;
        ssr += r * r;
    }
    let sigma2_mle = ssr / n as f64;
    Ok(aic_from_sigma2(sigma2_mle, n, p))
}

/// AIC kernel: `n (ln(2 pi sigma2) + 1) + 2p`. Strictly increasing in
/// `sigma2` at fixed `n` and `p`.
pub fn aic_from_sigma2(sigma2: f64, n_obs: usize, p: usize) -> f64 {
    let n = n_obs as f64;
    n * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0) + 2.0 * p as f64
}

/// AIC of each candidate order `1..=p_max`, scored on the common sample
/// `t = p_max+1..T`. Without a common sample the varying number of
/// likelihood terms drags the criterion toward `p_max` regardless of the
/// data.
pub fn aic_table(s: &Series, p_max: usize) -> Result<Vec<(usize, f64)>> {
    if p_max == 0 {
        return Err(Error::InvalidParameter("p_max must be >= 1".into()));
    }
    if p_max * 5 >= s.len() {
        return Err(Error::TooShort {
            len: s.len(),
            required: 5 * p_max + 1,
        });
    }
    let x = s.values();
    let mu = s.mean_hat();
    let n_common = x.len() - p_max;
    let mut table = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let fit = fit_ls(s, p)?;
        let mut ssr = 0.0;
        for ti in p_max..x.len() {
            let mut pred = 0.0;
            for (j, &c) in fit.model.phi.iter().enumerate() {
                pred += c * (x[ti - 1 - j] - mu);
            }
            let r = (x[ti] - mu) - pred;
            ssr += r * r;
        }
        table.push((p, aic_from_sigma2(ssr / n_common as f64, n_common, p)));
    }
    Ok(table)
}

/// Smallest-AIC lag order over `1..=p_max` via [`aic_table`]; ties break
/// toward smaller p.
pub fn select_lag(s: &Series, p_max: usize) -> Result<usize> {
    let table = aic_table(s, p_max)?;
    let mut best = (1usize, f64::INFINITY);
    for (p, a) in table {
        if a < best.1 {
            best = (p, a);
        }
    }
    Ok(best.0)
}

/// Differencing workflow: returns the smallest d in `0..=max_diff` whose
/// d-times-differenced series rejects a unit root at the 10% level. When no
/// order rejects, returns `max_diff` with `warning` set.
pub fn screen(s: &Series, max_diff: u32) -> Result<ScreenResult> {
    let mut current = s.clone();
    let mut last: Option<AdfResult> = None;
    for d in 0..=max_diff {
        let adf = adf_test(&current)?;
        let reject = adf.p_value < 0.10;
        last = Some(adf);
        if reject {
            return Ok(ScreenResult {
                diff_order: d,
                adf: last.unwrap(),
                warning: false,
            });
        }
        if d < max_diff {
            current = current.difference()?;
        }
    }
    Ok(ScreenResult {
        diff_order: max_diff,
        adf: last.unwrap(),
        warning: true,
    })
}
