//! h-step forecasting with error-adjusted initial values.
//!
//! Observed initial values are first mapped back to the latent scale
//! (`(X* - alpha0)/alpha1` or `X*/beta0`), then the AR recursion is iterated
//! with predicted values feeding later horizons. The mean squared prediction
//! error for p = 1 has closed forms under both error mechanisms; higher
//! orders use the Monte Carlo estimate.

use crate::error::{Error, Result};
use crate::error_models::ErrorModel;
use crate::model::ArModel;
use crate::stats::norm_ppf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// How the normal quantile scales the prediction-error term when building an
/// interval. `Sqrt` treats `pe` as a variance (the default); `Literal`
/// multiplies the quantile by `pe` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalScale {
    Sqrt,
    Literal,
}

/// Point forecasts with prediction error and intervals per horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecast {
    pub points: Vec<f64>,
    pub mspe: Vec<f64>,
    /// `(lo, hi)` per horizon at the level used to build the forecast.
    pub intervals: Vec<(f64, f64)>,
}

impl Forecast {
    /// Forecasts `horizon` steps from the last p surrogate observations:
    /// adjusts them to the latent scale, iterates the AR recursion, attaches
    /// per-horizon prediction errors (closed form at p = 1, the clean
    /// `sigma2 * sum psi_i^2` expansion for an identity mechanism, Monte
    /// Carlo with `mc_reps` replicates otherwise) and `(1 - alpha)`
    /// intervals.
    #[allow(clippy::too_many_arguments)]
    pub fn from_surrogate_tail(
        model: &ArModel,
        err: &ErrorModel,
        surrogate_tail: &[f64],
        horizon: usize,
        alpha: f64,
        scale: IntervalScale,
        mc_reps: usize,
        seed: u64,
    ) -> Result<Forecast> {
        let initials = adjust_initials(surrogate_tail, err);
        let points = forecast(model, &initials, horizon)?;
        let mut mspe_path = Vec::with_capacity(horizon);
        for h in 1..=horizon {
            let pe = if model.p() == 1 {
                mspe(model, err, h)?
            } else if err.is_identity() {
                error_free_mspe_arp(model, h)
            } else {
                monte_carlo_mspe(model, err, h, mc_reps, seed)?
            };
            mspe_path.push(pe);
        }
        let intervals = points
            .iter()
            .zip(&mspe_path)
            .map(|(&pt, &pe)| prediction_interval_scaled(pt, pe, alpha, scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(Forecast {
            points,
            mspe: mspe_path,
            intervals,
        })
    }
}

/// Maps the last p surrogate observations to latent-scale initial values.
pub fn adjust_initials(last_p_surrogates: &[f64], err: &ErrorModel) -> Vec<f64> {
    last_p_surrogates
        .iter()
        .map(|&x| match err {
            ErrorModel::Additive(a) => (x - a.alpha0) / a.alpha1,
            ErrorModel::Multiplicative(m) => x / m.beta0,
        })
        .collect()
}

/// Plug-in conditional-expectation forecasts
/// `X^_{T+h} = phi0 + phi_1 x_{T+h-1} + ... + phi_p x_{T+h-p}`,
/// where predicted values replace observations once h exceeds 1.
/// `initials` holds `(x_{T-p+1}, ..., x_T)` in time order.
pub fn forecast(model: &ArModel, initials: &[f64], horizon: usize) -> Result<Vec<f64>> {
    let p = model.p();
    if initials.len() != p {
        return Err(Error::InvalidParameter(format!(
            "need exactly p = {p} initial values, got {}",
            initials.len()
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let mut window: Vec<f64> = initials.to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let mut x = model.phi0;
        for (j, &c) in model.phi.iter().enumerate() {
            x += c * window[p - 1 - j];
        }
        out.push(x);
        window.rotate_left(1);
        window[p - 1] = x;
    }
    Ok(out)
}

/// Closed-form h-step mean squared prediction error for AR(1).
///
/// Additive: `P_e(h) = phi1^{2h} sigma_e2 / alpha1^2 + sum_{i<h} phi1^{2i} s2`.
/// Multiplicative: `P_e(h) = phi1^{2h} {s2/(1-phi1^2) + mu^2} sigma_u2 + same sum`.
/// The common sum is the error-free MSPE `(1 - phi1^{2h}) s2 / (1 - phi1^2)`.
pub fn mspe(model: &ArModel, err: &ErrorModel, h: usize) -> Result<f64> {
    if model.p() != 1 {
        return Err(Error::MspeOrderUnsupported);
    }
    model.require_stationary()?;
    if h == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    let phi1 = model.phi[0];
    let s2 = model.sigma_eps2;
    let base = error_free_mspe(phi1, s2, h);
    Ok(match err {
        ErrorModel::Additive(a) => {
            phi1.powi(2 * h as i32) * a.sigma_e2 / (a.alpha1 * a.alpha1) + base
        }
        ErrorModel::Multiplicative(m) => {
            let mu = model.mean();
            phi1.powi(2 * h as i32) * (s2 / (1.0 - phi1 * phi1) + mu * mu) * m.sigma_u2 + base
        }
    })
}

/// `(1 - phi1^{2h}) s2 / (1 - phi1^2)`, the p = 1 MSPE without measurement
/// error.
pub fn error_free_mspe(phi1: f64, sigma_eps2: f64, h: usize) -> f64 {
    if phi1 == 0.0 {
        return sigma_eps2;
    }
    (1.0 - phi1.powi(2 * h as i32)) * sigma_eps2 / (1.0 - phi1 * phi1)
}

/// Error-free h-step MSPE for any order: `sigma2 * sum_{i<h} psi_i^2` with
/// the moving-average weights of the AR recursion.
pub fn error_free_mspe_arp(model: &ArModel, h: usize) -> f64 {
    let p = model.p();
    if p == 1 {
        return error_free_mspe(model.phi[0], model.sigma_eps2, h);
    }
    let mut psi = vec![0.0; h];
    psi[0] = 1.0;
    for i in 1..h {
        let mut v = 0.0;
        for (j, &c) in model.phi.iter().enumerate() {
            if i > j {
                v += c * psi[i - 1 - j];
            }
        }
        psi[i] = v;
    }
    model.sigma_eps2 * psi.iter().map(|w| w * w).sum::<f64>()
}

/// Monte Carlo h-step MSPE: draws a stationary history, contaminates the
/// last p observations, forecasts from the adjusted initial values, and
/// averages the squared error against the true continuation. Works for any
/// p; serves as the oracle for the closed forms.
pub fn monte_carlo_mspe(
    model: &ArModel,
    err: &ErrorModel,
    h: usize,
    reps: usize,
    seed: u64,
) -> Result<f64> {
    if reps < 100 {
        return Err(Error::InvalidParameter(
            "need at least 100 replicates".into(),
        ));
    }
    if h == 0 {
        return Err(Error::InvalidParameter("horizon must be >= 1".into()));
    }
    model.require_stationary()?;
    let p = model.p();
    let burn = 500;
    let sq_errors = crate::exec::keyed_map(reps, |rep| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep as u64 + 1);
        let innov = Normal::new(0.0, model.sigma_eps2.sqrt()).unwrap();
        // Stationary history of length p after burn-in.
        let mut window = vec![model.mean(); p];
        for _ in 0..burn {
            let mut x = model.phi0;
            for (j, &c) in model.phi.iter().enumerate() {
                x += c * window[p - 1 - j];
            }
            x += innov.sample(&mut rng);
            window.rotate_left(1);
            window[p - 1] = x;
        }
        // Contaminated initial values seen by the forecaster.
        let hist = crate::series::Series::new(window.clone()).unwrap();
        let noisy = err.contaminate_with_rng(&hist, &mut rng);
        let adjusted = adjust_initials(noisy.values(), err);
        let predicted = forecast(model, &adjusted, h).unwrap();
        // True continuation with fresh innovations.
        let mut truth = window;
        let mut x_future = 0.0;
        for _ in 0..h {
            let mut x = model.phi0;
            for (j, &c) in model.phi.iter().enumerate() {
                x += c * truth[p - 1 - j];
            }
            x += innov.sample(&mut rng);
            truth.rotate_left(1);
            truth[p - 1] = x;
            x_future = x;
        }
        let e = predicted[h - 1] - x_future;
        e * e
    });
    Ok(crate::exec::pairwise_mean(&sq_errors))
}

/// `(1 - alpha)` prediction interval centered at `point`. Under the default
/// square-root scaling the half-width is `q_{1-alpha/2} * sqrt(pe)`.
pub fn prediction_interval(point: f64, pe: f64, alpha: f64) -> Result<(f64, f64)> {
    prediction_interval_scaled(point, pe, alpha, IntervalScale::Sqrt)
}

pub fn prediction_interval_scaled(
    point: f64,
    pe: f64,
    alpha: f64,
    scale: IntervalScale,
) -> Result<(f64, f64)> {
    if pe.is_nan() || pe < 0.0 {
        return Err(Error::InvalidParameter(
            "prediction error must be >= 0".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
    }
    let q = norm_ppf(1.0 - alpha / 2.0);
    let half = match scale {
        IntervalScale::Sqrt => q * pe.sqrt(),
        IntervalScale::Literal => q * pe,
    };
    Ok((point - half, point + half))
}
