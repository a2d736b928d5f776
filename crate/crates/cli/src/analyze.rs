//! The full analysis pipeline: stationarity screening, lag selection, naive
//! fit, corrected fits over a sensitivity grid with bootstrap standard
//! errors, and h-step forecasts with prediction intervals on both the fitted
//! and the level scale.

use crate::CliError;
use chrono::NaiveDate;
use errts_core::corrected::{block_bootstrap, default_block_len, fit_corrected};
use errts_core::error_models::{AdditiveError, ErrorModel, MultiplicativeError, NoiseDist};
use errts_core::forecast::{adjust_initials, prediction_interval_scaled, Forecast, IntervalScale};
use errts_core::select::{screen, select_lag};
use errts_core::stats::wald_p_value;
use errts_core::{fit_ee, ArModel, Series};
use serde::Serialize;

/// Error mechanism family requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Additive,
    Multiplicative,
}

/// Sensitivity sweep: one corrected analysis per grid value of the error
/// variance, sharing the scale parameters.
#[derive(Debug, Clone)]
pub struct SensitivitySpec {
    pub kind: ErrorKind,
    /// sigma_e2 values (additive) or sigma_u2 values (multiplicative).
    pub grid: Vec<f64>,
    /// alpha0 for the additive model (0 in the tau_a parameterization).
    pub alpha0: f64,
    /// alpha1 or beta0; `1/(1 - tau_a)` when derived from an asymptomatic rate.
    pub scale: f64,
    pub dist: NoiseDist,
}

impl SensitivitySpec {
    pub fn error_model(&self, variance: f64) -> Result<ErrorModel, CliError> {
        Ok(match self.kind {
            ErrorKind::Additive => ErrorModel::Additive(
                AdditiveError::new(self.alpha0, self.scale, variance).map_err(CliError::model)?,
            ),
            ErrorKind::Multiplicative => ErrorModel::Multiplicative(
                MultiplicativeError::new(self.scale, variance, self.dist)
                    .map_err(CliError::model)?,
            ),
        })
    }
}

/// Everything the pipeline needs besides the data.
#[derive(Debug, Clone)]
pub struct AnalysisSettings {
    pub horizon: usize,
    pub level: f64,
    pub boot_reps: usize,
    pub block_len: Option<usize>,
    pub seed: u64,
    pub interval_scale: IntervalScale,
    /// None = screen decides; Some(d) forces d.
    pub diff: Option<u32>,
    /// None = AIC decides; Some(p) forces p.
    pub lag: Option<usize>,
    pub max_lag: usize,
    /// Replicates for the Monte Carlo MSPE fallback at p > 1.
    pub mspe_reps: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            horizon: 5,
            level: 0.95,
            boot_reps: 1000,
            block_len: None,
            seed: 1,
            interval_scale: IntervalScale::Sqrt,
            diff: None,
            lag: None,
            max_lag: 5,
            mspe_reps: 20_000,
        }
    }
}

#[derive(Debug, Serialize, Clone)]
pub struct ParamRow {
    pub name: String,
    pub est: f64,
    pub se: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Serialize, Clone)]
pub struct ForecastPoint {
    pub h: usize,
    pub date: Option<String>,
    pub point: f64,
    pub pe: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Serialize, Clone)]
pub struct ForecastBlock {
    /// "fitted" (possibly differenced) or "level".
    pub scale: String,
    pub points: Vec<ForecastPoint>,
    /// Sum of the per-horizon prediction errors.
    pub total_pe: f64,
}

#[derive(Debug, Serialize, Clone)]
pub struct VariantReport {
    pub label: String,
    pub error_kind: String,
    /// sigma_e2 or sigma_u2 for this grid point; 0 for the naive row.
    pub error_variance: f64,
    pub scale_param: f64,
    pub bound_ok: bool,
    /// Populated when the variant could not be analyzed; other fields empty.
    pub failure: Option<String>,
    pub params: Vec<ParamRow>,
    pub sigma_eps2: Option<f64>,
    pub nonstationary_warning: bool,
    pub forecast_fitted: Option<ForecastBlock>,
    pub forecast_level: Option<ForecastBlock>,
}

#[derive(Debug, Serialize, Clone)]
pub struct ScreeningReport {
    pub diff_order: u32,
    pub adf_statistic: f64,
    pub adf_p_value: f64,
    pub adf_lags: usize,
    pub warning: bool,
}

#[derive(Debug, Serialize, Clone)]
pub struct AnalysisReport {
    pub t: usize,
    pub origin: Option<String>,
    pub screening: Option<ScreeningReport>,
    pub diff_order: u32,
    pub lag: usize,
    pub horizon: usize,
    pub level: f64,
    pub block_len: usize,
    pub boot_reps: usize,
    pub seed: u64,
    pub interval_scale: String,
    pub naive: VariantReport,
    pub variants: Vec<VariantReport>,
}

/// Runs screen -> select_lag -> naive fit -> per-grid corrected fit +
/// bootstrap + forecasts.
pub fn analyze(
    series: &Series,
    dates: Option<&[NaiveDate]>,
    spec: &SensitivitySpec,
    settings: &AnalysisSettings,
) -> Result<AnalysisReport, CliError> {
    // Differencing decision.
    let (diff_order, screening) = match settings.diff {
        Some(d) => (d, None),
        None => {
            let sr = screen(series, 1).map_err(CliError::model)?;
            let rep = ScreeningReport {
                diff_order: sr.diff_order,
                adf_statistic: sr.adf.statistic,
                adf_p_value: sr.adf.p_value,
                adf_lags: sr.adf.lags_used,
                warning: sr.warning,
            };
            (sr.diff_order, Some(rep))
        }
    };
    let mut fitted = series.clone();
    for _ in 0..diff_order {
        fitted = fitted.difference().map_err(CliError::model)?;
    }

    // Lag decision.
    let lag = match settings.lag {
        Some(p) => p,
        None => {
            let p_max = settings
                .max_lag
                .min((fitted.len() / 5).saturating_sub(1))
                .max(1);
            select_lag(&fitted, p_max).map_err(CliError::model)?
        }
    };
    let block_len = settings
        .block_len
        .unwrap_or_else(|| default_block_len(fitted.len()));

    // Forecast dates: one step per day past the last observation.
    let forecast_dates: Option<Vec<String>> = dates.map(|d| {
        let last = *d.last().unwrap();
        (1..=settings.horizon)
            .map(|h| (last + chrono::Days::new(h as u64)).to_string())
            .collect()
    });

    // The naive row is the identity-error analysis.
    let identity = ErrorModel::Additive(AdditiveError::identity());
    let naive = analyze_variant(
        &fitted,
        series,
        &identity,
        "naive",
        0.0,
        1.0,
        lag,
        block_len,
        settings,
        forecast_dates.as_deref(),
        settings.seed,
    );

    // Grid points run through the same path with their own error models;
    // failures are recorded per point without aborting the sweep.
    let variants: Vec<VariantReport> = spec
        .grid
        .iter()
        .enumerate()
        .map(|(i, &variance)| {
            let label = match spec.kind {
                ErrorKind::Additive => format!("additive sigma_e2={variance}"),
                ErrorKind::Multiplicative => format!("multiplicative sigma_u2={variance}"),
            };
            match spec.error_model(variance) {
                Ok(err) => analyze_variant(
                    &fitted,
                    series,
                    &err,
                    &label,
                    variance,
                    spec.scale,
                    lag,
                    block_len,
                    settings,
                    forecast_dates.as_deref(),
                    settings.seed.wrapping_add(1 + i as u64),
                ),
                Err(e) => failed_variant(&label, spec, variance, e.to_string()),
            }
        })
        .collect();

    Ok(AnalysisReport {
        t: series.len(),
        origin: series.origin.clone(),
        screening,
        diff_order,
        lag,
        horizon: settings.horizon,
        level: settings.level,
        block_len,
        boot_reps: settings.boot_reps,
        seed: settings.seed,
        interval_scale: match settings.interval_scale {
            IntervalScale::Sqrt => "sqrt".into(),
            IntervalScale::Literal => "literal".into(),
        },
        naive,
        variants,
    })
}

fn failed_variant(
    label: &str,
    spec: &SensitivitySpec,
    variance: f64,
    message: String,
) -> VariantReport {
    VariantReport {
        label: label.to_string(),
        error_kind: match spec.kind {
            ErrorKind::Additive => "additive".into(),
            ErrorKind::Multiplicative => "multiplicative".into(),
        },
        error_variance: variance,
        scale_param: spec.scale,
        bound_ok: false,
        failure: Some(message),
        params: Vec::new(),
        sigma_eps2: None,
        nonstationary_warning: false,
        forecast_fitted: None,
        forecast_level: None,
    }
}

/// One corrected (or naive, via the identity model) analysis of the fitted
/// series, reporting EST/SE/p-value per parameter and both forecast scales.
#[allow(clippy::too_many_arguments)]
pub fn analyze_variant(
    fitted: &Series,
    level_series: &Series,
    err: &ErrorModel,
    label: &str,
    variance: f64,
    scale_param: f64,
    lag: usize,
    block_len: usize,
    settings: &AnalysisSettings,
    forecast_dates: Option<&[String]>,
    seed: u64,
) -> VariantReport {
    let kind = match err {
        ErrorModel::Additive(_) => "additive",
        ErrorModel::Multiplicative(_) => "multiplicative",
    };
    let mut report = VariantReport {
        label: label.to_string(),
        error_kind: kind.into(),
        error_variance: variance,
        scale_param,
        bound_ok: true,
        failure: None,
        params: Vec::new(),
        sigma_eps2: None,
        nonstationary_warning: false,
        forecast_fitted: None,
        forecast_level: None,
    };

    // Bound check against the observed variability of the analyzed series.
    let var_star = match fitted.autocov_hat(0) {
        Ok(v) => v,
        Err(e) => {
            report.failure = Some(e.to_string());
            report.bound_ok = false;
            return report;
        }
    };
    let mu_corrected = match err {
        ErrorModel::Additive(a) => (fitted.mean_hat() - a.alpha0) / a.alpha1,
        ErrorModel::Multiplicative(m) => fitted.mean_hat() / m.beta0,
    };
    if !err.validate_bounds(var_star, mu_corrected) {
        report.bound_ok = false;
        report.failure = Some(format!(
            "error variance bound violated: observed Var(X*) = {var_star:.6}"
        ));
        return report;
    }

    let corrected = match fit_corrected(fitted, lag, err) {
        Ok(c) => c,
        Err(e) => {
            report.failure = Some(e.to_string());
            return report;
        }
    };
    report.nonstationary_warning = corrected.nonstationary_warning;
    report.sigma_eps2 = Some(corrected.fit.model.sigma_eps2);

    let boot = block_bootstrap(fitted, lag, err, block_len, settings.boot_reps, seed, false);
    let ses: Vec<Option<f64>> = match &boot {
        Ok(b) => b.std_errors.iter().map(|&s| Some(s)).collect(),
        Err(_) => vec![None; lag + 2],
    };

    let mut names = vec!["phi0".to_string()];
    names.extend((1..=lag).map(|j| format!("phi{j}")));
    names.push("sigma_eps2".to_string());
    let ests = corrected.fit.param_vec();
    for ((name, est), se) in names.into_iter().zip(ests).zip(&ses) {
        let p_value = se.and_then(|s| {
            if s > 0.0 {
                Some(wald_p_value(est / s))
            } else {
                None
            }
        });
        report.params.push(ParamRow {
            name,
            est,
            se: *se,
            p_value,
        });
    }

    // Forecasts from the error-adjusted initial values on the fitted scale.
    let model = corrected.fit.model.clone();
    match forecast_from_surrogate(
        fitted,
        level_series,
        &model,
        err,
        settings,
        forecast_dates,
        seed,
    ) {
        Ok((fitted_block, level_block)) => {
            report.forecast_fitted = Some(fitted_block);
            report.forecast_level = level_block;
        }
        Err(e) => {
            if report.failure.is_none() {
                report.failure = Some(format!("forecast failed: {e}"));
            }
        }
    }
    report
}

/// Point forecasts plus prediction errors on the fitted scale, and the
/// level-scale reconstruction when the fitted series was differenced.
///
/// Levels are rebuilt by cumulative summation anchored at the error-adjusted
/// last level, with level-scale prediction errors accumulated as partial sums
/// of the fitted-scale ones (independence approximation across horizons).
fn forecast_from_surrogate(
    fitted: &Series,
    level_series: &Series,
    model: &ArModel,
    err: &ErrorModel,
    settings: &AnalysisSettings,
    forecast_dates: Option<&[String]>,
    seed: u64,
) -> Result<(ForecastBlock, Option<ForecastBlock>), CliError> {
    let p = model.p();
    let h_max = settings.horizon;
    let alpha = 1.0 - settings.level;
    let tail = &fitted.values()[fitted.len() - p..];
    let fc = Forecast::from_surrogate_tail(
        model,
        err,
        tail,
        h_max,
        alpha,
        settings.interval_scale,
        settings.mspe_reps,
        seed ^ 0x5eed,
    )
    .map_err(CliError::model)?;
    let date_of = |h: usize| forecast_dates.map(|d| d[h - 1].clone());

    let was_differenced = fitted.diff_order > level_series.diff_order;
    let fitted_points: Vec<ForecastPoint> = (1..=h_max)
        .map(|h| ForecastPoint {
            h,
            date: date_of(h),
            point: fc.points[h - 1],
            pe: fc.mspe[h - 1],
            lo: fc.intervals[h - 1].0,
            hi: fc.intervals[h - 1].1,
        })
        .collect();
    let fitted_block = ForecastBlock {
        scale: if was_differenced {
            "differenced".into()
        } else {
            "level".into()
        },
        points: fitted_points,
        total_pe: fc.mspe.iter().sum(),
    };

    if !was_differenced {
        return Ok((fitted_block, None));
    }

    // Levels: integrate the differenced forecasts, anchored at the
    // error-adjusted last observed level.
    let last_level = *level_series.values().last().unwrap();
    let anchor = adjust_initials(&[last_level], err)[0];
    let mut diffs = Series::new(fc.points.clone()).map_err(CliError::model)?;
    diffs.diff_order = fitted.diff_order;
    let levels = diffs.integrate(anchor).map_err(CliError::model)?;
    let mut level_points = Vec::with_capacity(h_max);
    let mut running_pe = 0.0;
    for h in 1..=h_max {
        let point = levels.values()[h]; // values()[0] is the anchor
        running_pe += fc.mspe[h - 1];
        let (lo, hi) =
            prediction_interval_scaled(point, running_pe, alpha, settings.interval_scale)
                .map_err(CliError::model)?;
        level_points.push(ForecastPoint {
            h,
            date: date_of(h),
            point,
            pe: running_pe,
            lo,
            hi,
        });
    }
    let total = level_points.iter().map(|pt| pt.pe).sum();
    Ok((
        fitted_block,
        Some(ForecastBlock {
            scale: "level".into(),
            points: level_points,
            total_pe: total,
        }),
    ))
}

/// Naive-fit report used by the `naive` subcommand (no correction); the
/// identity error model makes `analyze_variant` produce exactly this.
pub fn naive_report(
    fitted: &Series,
    level_series: &Series,
    lag: usize,
    settings: &AnalysisSettings,
    forecast_dates: Option<&[String]>,
) -> VariantReport {
    let identity = ErrorModel::Additive(AdditiveError::identity());
    let block_len = settings
        .block_len
        .unwrap_or_else(|| default_block_len(fitted.len()));
    analyze_variant(
        fitted,
        level_series,
        &identity,
        "naive",
        0.0,
        1.0,
        lag,
        block_len,
        settings,
        forecast_dates,
        settings.seed,
    )
}

/// Clean two-method fit for the `fit` subcommand.
#[derive(Debug, Serialize)]
pub struct FitReport {
    pub t: usize,
    pub lag: usize,
    pub least_squares: Vec<ParamRow>,
    pub estimating_equations: Vec<ParamRow>,
    pub equivalence_gap: f64,
}

pub fn fit_report(fitted: &Series, lag: usize) -> Result<FitReport, CliError> {
    let ls = errts_core::fit_ls(fitted, lag).map_err(CliError::model)?;
    let ee =
        fit_ee(&fitted.autocov_summary(lag).map_err(CliError::model)?).map_err(CliError::model)?;
    let gap = errts_core::fitted_equivalence_gap(fitted, lag).map_err(CliError::model)?;
    let rows = |fit: &errts_core::ArFit| {
        let mut names = vec!["phi0".to_string()];
        names.extend((1..=lag).map(|j| format!("phi{j}")));
        names.push("sigma_eps2".to_string());
        names
            .into_iter()
            .zip(fit.param_vec())
            .map(|(name, est)| ParamRow {
                name,
                est,
                se: None,
                p_value: None,
            })
            .collect::<Vec<_>>()
    };
    Ok(FitReport {
        t: fitted.len(),
        lag,
        least_squares: rows(&ls),
        estimating_equations: rows(&ee),
        equivalence_gap: gap,
    })
}
