//! `errts`: analysis of error-prone time series under AR models.
//!
//! Subcommands: `fit`, `naive`, `correct`, `forecast`, `sensitivity`,
//! `simulate`, `adf`, `select`. Flags may also come from a JSON config file
//! (`--config`), with command-line values taking precedence.
//!
//! Exit codes: 0 success, 1 data error, 2 model/bound error, 3 internal.

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use errts_cli::analyze::{
    self, analyze, fit_report, naive_report, AnalysisReport, AnalysisSettings, ErrorKind,
    SensitivitySpec,
};
use errts_cli::ingest::{ingest, mortality_rate, CountBasis, Ingested};
use errts_cli::{report, CliError};
use errts_core::error_models::{
    scale_from_tau_a, AdditiveError, ErrorModel, MultiplicativeError, NoiseDist,
};
use errts_core::forecast::IntervalScale;
use errts_core::montecarlo::{simulate_ar, SimSpec};
use errts_core::select::{adf_test, aic_table, select_lag};
use errts_core::{ArModel, Series};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Command line

#[derive(Parser)]
#[command(
    name = "errts",
    version,
    about = "AR time-series analysis under measurement error"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit an AR model by least squares and estimating equations.
    Fit(Opts),
    /// Naive analysis: fit the observed series as if error-free.
    Naive(Opts),
    /// Bias-corrected fit under a specified error model.
    Correct(Opts),
    /// Corrected fit plus h-step forecasts with prediction intervals.
    Forecast(Opts),
    /// Corrected analyses across a grid of error variances.
    Sensitivity(Opts),
    /// Simulate an AR series, optionally contaminated.
    Simulate(Opts),
    /// Augmented Dickey-Fuller unit-root test.
    Adf(Opts),
    /// AIC lag-order table and selection.
    Select(Opts),
}

#[derive(Args, Default, Clone)]
struct Opts {
    /// Input CSV: `date,cases,deaths` (cumulative) or `date,value`.
    #[arg(long)]
    input: Option<String>,
    /// JSON config file mirroring all flags; flags override it.
    #[arg(long)]
    config: Option<String>,
    /// Mortality-rate definition for 3-column input: 1, 2, or 3.
    #[arg(long)]
    definition: Option<u8>,
    /// Differencing: "auto" (ADF screen) or an explicit order 0/1.
    #[arg(long)]
    diff: Option<String>,
    /// Lag order: "auto" (AIC) or an explicit positive integer.
    #[arg(long)]
    lag: Option<String>,
    /// Error mechanism: "additive" or "multiplicative".
    #[arg(long)]
    error: Option<String>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    sigma_e2: Option<f64>,
    #[arg(long)]
    beta0: Option<f64>,
    #[arg(long)]
    sigma_u2: Option<f64>,
    /// Asymptomatic rate; sets alpha1 or beta0 to 1/(1 - tau_a).
    #[arg(long)]
    tau_a: Option<f64>,
    /// Comma-separated error-variance grid for `sensitivity`.
    #[arg(long)]
    grid: Option<String>,
    /// Multiplicative noise family: "lognormal" (default) or "gamma".
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Interval level, e.g. 0.95.
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    boot_reps: Option<usize>,
    #[arg(long)]
    block_len: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    /// "json", "text", or "csv".
    #[arg(long)]
    format: Option<String>,
    /// Interval half-width uses sqrt(P_e) ("sqrt", default) or P_e ("literal").
    #[arg(long)]
    interval_scale: Option<String>,
    /// Rate construction from "cumulative" (default) or "daily" counts.
    #[arg(long)]
    count_basis: Option<String>,
    /// Largest lag order AIC considers.
    #[arg(long)]
    max_lag: Option<usize>,
    /// Replicates for Monte Carlo prediction error at p > 1.
    #[arg(long)]
    mspe_reps: Option<usize>,
    // simulate-only:
    #[arg(long)]
    phi0: Option<f64>,
    /// Comma-separated AR coefficients, e.g. "0.5,-0.3".
    #[arg(long)]
    phi: Option<String>,
    #[arg(long)]
    sigma_eps2: Option<f64>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    /// First date of the simulated series (ISO-8601).
    #[arg(long)]
    start_date: Option<String>,
}

/// JSON config with the same keys as the long flags.
#[derive(Deserialize, Default)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    input: Option<String>,
    definition: Option<u8>,
    diff: Option<String>,
    lag: Option<String>,
    error: Option<String>,
    alpha0: Option<f64>,
    alpha1: Option<f64>,
    sigma_e2: Option<f64>,
    beta0: Option<f64>,
    sigma_u2: Option<f64>,
    tau_a: Option<f64>,
    grid: Option<String>,
    dist: Option<String>,
    horizon: Option<usize>,
    level: Option<f64>,
    boot_reps: Option<usize>,
    block_len: Option<usize>,
    seed: Option<u64>,
    out: Option<String>,
    format: Option<String>,
    interval_scale: Option<String>,
    count_basis: Option<String>,
    max_lag: Option<usize>,
    mspe_reps: Option<usize>,
    phi0: Option<f64>,
    phi: Option<String>,
    sigma_eps2: Option<f64>,
    length: Option<usize>,
    burn_in: Option<usize>,
    start_date: Option<String>,
}

impl Opts {
    /// Fills unset options from the config file, if any.
    fn merged(mut self) -> Result<Opts, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::data(format!("cannot read config {path}: {e}")))?;
        let cfg: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::data(format!("bad config {path}: {e}")))?;
        macro_rules! fill {
            ($($field:ident),*) => {
                $(if self.$field.is_none() { self.$field = cfg.$field; })*
            };
        }
        fill!(
            input,
            definition,
            diff,
            lag,
            error,
            alpha0,
            alpha1,
            sigma_e2,
            beta0,
            sigma_u2,
            tau_a,
            grid,
            dist,
            horizon,
            level,
            boot_reps,
            block_len,
            seed,
            out,
            format,
            interval_scale,
            count_basis,
            max_lag,
            mspe_reps,
            phi0,
            phi,
            sigma_eps2,
            length,
            burn_in,
            start_date
        );
        Ok(self)
    }

    fn format(&self) -> Format {
        match self.format.as_deref() {
            Some("text") => Format::Text,
            Some("csv") => Format::Csv,
            _ => Format::Json,
        }
    }

    fn count_basis(&self) -> Result<CountBasis, CliError> {
        match self.count_basis.as_deref() {
            None | Some("cumulative") => Ok(CountBasis::Cumulative),
            Some("daily") => Ok(CountBasis::Daily),
            Some(other) => Err(CliError::data(format!(
                "count-basis must be 'cumulative' or 'daily', got '{other}'"
            ))),
        }
    }

    fn interval_scale(&self) -> Result<IntervalScale, CliError> {
        match self.interval_scale.as_deref() {
            None | Some("sqrt") => Ok(IntervalScale::Sqrt),
            Some("literal") => Ok(IntervalScale::Literal),
            Some(other) => Err(CliError::data(format!(
                "interval-scale must be 'sqrt' or 'literal', got '{other}'"
            ))),
        }
    }

    fn noise_dist(&self) -> Result<NoiseDist, CliError> {
        match self.dist.as_deref() {
            None | Some("lognormal") => Ok(NoiseDist::Lognormal),
            Some("gamma") => Ok(NoiseDist::Gamma),
            Some(other) => Err(CliError::data(format!(
                "dist must be 'lognormal' or 'gamma', got '{other}'"
            ))),
        }
    }

    fn diff_choice(&self) -> Result<Option<u32>, CliError> {
        match self.diff.as_deref() {
            None | Some("auto") => Ok(None),
            Some(s) => s
                .parse::<u32>()
                .map(Some)
                .map_err(|_| CliError::data(format!("diff must be 'auto' or 0/1, got '{s}'"))),
        }
    }

    fn lag_choice(&self) -> Result<Option<usize>, CliError> {
        match self.lag.as_deref() {
            None | Some("auto") => Ok(None),
            Some(s) => {
                let p: usize = s
                    .parse()
                    .map_err(|_| CliError::data(format!("lag must be 'auto' or N, got '{s}'")))?;
                if p == 0 {
                    return Err(CliError::data("lag must be >= 1"));
                }
                Ok(Some(p))
            }
        }
    }

    fn settings(&self) -> Result<AnalysisSettings, CliError> {
        let mut s = AnalysisSettings {
            diff: self.diff_choice()?,
            lag: self.lag_choice()?,
            interval_scale: self.interval_scale()?,
            ..AnalysisSettings::default()
        };
        if let Some(h) = self.horizon {
            s.horizon = h;
        }
        if let Some(l) = self.level {
            if !(0.0 < l && l < 1.0) {
                return Err(CliError::data("level must lie in (0, 1)"));
            }
            s.level = l;
        }
        if let Some(n) = self.boot_reps {
            s.boot_reps = n;
        }
        s.block_len = self.block_len;
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(m) = self.max_lag {
            s.max_lag = m;
        }
        if let Some(r) = self.mspe_reps {
            s.mspe_reps = r;
        }
        Ok(s)
    }

    /// Scale parameter (alpha1 or beta0), honoring `--tau-a`.
    fn scale(&self, kind: ErrorKind) -> Result<f64, CliError> {
        if let Some(tau) = self.tau_a {
            return scale_from_tau_a(tau).map_err(CliError::model);
        }
        Ok(match kind {
            ErrorKind::Additive => self.alpha1.unwrap_or(1.0),
            ErrorKind::Multiplicative => self.beta0.unwrap_or(1.0),
        })
    }

    fn error_kind(&self) -> Result<ErrorKind, CliError> {
        match self.error.as_deref() {
            Some("additive") => Ok(ErrorKind::Additive),
            Some("multiplicative") => Ok(ErrorKind::Multiplicative),
            Some(other) => Err(CliError::data(format!(
                "error must be 'additive' or 'multiplicative', got '{other}'"
            ))),
            None => Err(CliError::data(
                "an error model is required: --error additive|multiplicative",
            )),
        }
    }

    /// Fully specified single error model for `correct`/`forecast`/`simulate`.
    fn single_error_model(&self) -> Result<ErrorModel, CliError> {
        let kind = self.error_kind()?;
        let scale = self.scale(kind)?;
        match kind {
            ErrorKind::Additive => {
                let v = self.sigma_e2.ok_or_else(|| {
                    CliError::data("--sigma-e2 is required for the additive model")
                })?;
                Ok(ErrorModel::Additive(
                    AdditiveError::new(self.alpha0.unwrap_or(0.0), scale, v)
                        .map_err(CliError::model)?,
                ))
            }
            ErrorKind::Multiplicative => {
                let v = self.sigma_u2.ok_or_else(|| {
                    CliError::data("--sigma-u2 is required for the multiplicative model")
                })?;
                Ok(ErrorModel::Multiplicative(
                    MultiplicativeError::new(scale, v, self.noise_dist()?)
                        .map_err(CliError::model)?,
                ))
            }
        }
    }

    fn grid_values(&self) -> Result<Vec<f64>, CliError> {
        let raw = self
            .grid
            .as_deref()
            .ok_or_else(|| CliError::data("--grid v1,v2,... is required for sensitivity"))?;
        let values: Result<Vec<f64>, _> = raw.split(',').map(|v| v.trim().parse()).collect();
        let values = values.map_err(|_| CliError::data(format!("bad grid '{raw}'")))?;
        if values.is_empty() {
            return Err(CliError::data("grid must be non-empty"));
        }
        Ok(values)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Csv,
}

// ---------------------------------------------------------------------------

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(o) => o.merged().and_then(run_fit),
        Command::Naive(o) => o.merged().and_then(run_naive),
        Command::Correct(o) => o.merged().and_then(run_correct),
        Command::Forecast(o) => o.merged().and_then(run_forecast),
        Command::Sensitivity(o) => o.merged().and_then(run_sensitivity),
        Command::Simulate(o) => o.merged().and_then(run_simulate),
        Command::Adf(o) => o.merged().and_then(run_adf),
        Command::Select(o) => o.merged().and_then(run_select),
    };
    if let Err(e) = result {
        eprintln!("errts: {e}");
        std::process::exit(e.exit_code());
    }
}

/// Loads the input series with its date column, applying the mortality-rate
/// definition when the file carries case/death counts.
fn load_series(opts: &Opts) -> Result<(Series, Option<Vec<NaiveDate>>), CliError> {
    let path = opts
        .input
        .as_deref()
        .ok_or_else(|| CliError::data("--input is required"))?;
    match ingest(path)? {
        Ingested::Table(table) => {
            let definition = opts.definition.unwrap_or(1);
            let (series, dates) = mortality_rate(&table, definition, opts.count_basis()?)?;
            Ok((series, Some(dates)))
        }
        Ingested::Values(series) => {
            let dates = series_dates(&series);
            Ok((series, dates))
        }
    }
}

/// Reconstructs the per-observation dates from the origin, one day apart.
fn series_dates(series: &Series) -> Option<Vec<NaiveDate>> {
    let origin = series.origin.as_deref()?;
    let start = NaiveDate::parse_from_str(origin, "%Y-%m-%d").ok()?;
    Some(
        (0..series.len() as u64)
            .map(|i| start + chrono::Days::new(i))
            .collect(),
    )
}

fn apply_differencing(
    series: &Series,
    dates: Option<&[NaiveDate]>,
    settings: &AnalysisSettings,
) -> Result<(Series, u32, Option<Vec<NaiveDate>>), CliError> {
    let d = match settings.diff {
        Some(d) => d,
        None => {
            errts_core::select::screen(series, 1)
                .map_err(CliError::model)?
                .diff_order
        }
    };
    let mut fitted = series.clone();
    for _ in 0..d {
        fitted = fitted.difference().map_err(CliError::model)?;
    }
    let trimmed = dates.map(|ds| ds[d as usize..].to_vec());
    Ok((fitted, d, trimmed))
}

fn resolve_lag(fitted: &Series, settings: &AnalysisSettings) -> Result<usize, CliError> {
    match settings.lag {
        Some(p) => Ok(p),
        None => {
            let p_max = settings
                .max_lag
                .min((fitted.len() / 5).saturating_sub(1))
                .max(1);
            select_lag(fitted, p_max).map_err(CliError::model)
        }
    }
}

fn emit(opts: &Opts, content: String) -> Result<(), CliError> {
    match opts.out.as_deref() {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::data(format!("cannot write {path}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_fit(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let (series, dates) = load_series(&opts)?;
    let (fitted, _, _) = apply_differencing(&series, dates.as_deref(), &settings)?;
    let lag = resolve_lag(&fitted, &settings)?;
    let rep = fit_report(&fitted, lag)?;
    let content = match opts.format() {
        Format::Json | Format::Csv => report::fit_json(&rep)? + "\n",
        Format::Text => report::fit_text(&rep),
    };
    emit(&opts, content)
}

fn run_naive(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let (series, dates) = load_series(&opts)?;
    let report = analysis_with_variants(&series, dates.as_deref(), &settings, Vec::new())?;
    emit_analysis(&opts, report)
}

fn run_correct(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let err = opts.single_error_model()?;
    let (series, dates) = load_series(&opts)?;
    let report = analysis_with_variants(&series, dates.as_deref(), &settings, vec![err])?;
    // A bound violation or failed correction is a hard error here, unlike in
    // a sensitivity sweep.
    if let Some(v) = report.variants.first() {
        if let Some(f) = &v.failure {
            return Err(CliError::model(f));
        }
    }
    emit_analysis(&opts, report)
}

fn run_forecast(opts: Opts) -> Result<(), CliError> {
    run_correct(opts)
}

fn run_sensitivity(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let kind = opts.error_kind()?;
    let spec = SensitivitySpec {
        kind,
        grid: opts.grid_values()?,
        alpha0: opts.alpha0.unwrap_or(0.0),
        scale: opts.scale(kind)?,
        dist: opts.noise_dist()?,
    };
    let (series, dates) = load_series(&opts)?;
    let report = analyze(&series, dates.as_deref(), &spec, &settings)?;
    emit_analysis(&opts, report)
}

/// Baseline report whose variant list comes from explicit error models
/// rather than a grid; used by `naive`, `correct`, and `forecast`.
fn analysis_with_variants(
    series: &Series,
    dates: Option<&[NaiveDate]>,
    settings: &AnalysisSettings,
    errors: Vec<ErrorModel>,
) -> Result<AnalysisReport, CliError> {
    let (fitted, diff_order, trimmed_dates) = apply_differencing(series, dates, settings)?;
    let lag = resolve_lag(&fitted, settings)?;
    let block_len = settings
        .block_len
        .unwrap_or_else(|| errts_core::corrected::default_block_len(fitted.len()));
    let forecast_dates: Option<Vec<String>> = trimmed_dates.as_deref().map(|d| {
        let last = *d.last().unwrap();
        (1..=settings.horizon)
            .map(|h| (last + chrono::Days::new(h as u64)).to_string())
            .collect()
    });

    let screening = if settings.diff.is_none() {
        let sr = errts_core::select::screen(series, 1).map_err(CliError::model)?;
        Some(analyze::ScreeningReport {
            diff_order: sr.diff_order,
            adf_statistic: sr.adf.statistic,
            adf_p_value: sr.adf.p_value,
            adf_lags: sr.adf.lags_used,
            warning: sr.warning,
        })
    } else {
        None
    };

    let naive = naive_report(&fitted, series, lag, settings, forecast_dates.as_deref());
    let variants = errors
        .into_iter()
        .enumerate()
        .map(|(i, err)| {
            let (variance, scale_param, label) = match &err {
                ErrorModel::Additive(a) => (
                    a.sigma_e2,
                    a.alpha1,
                    format!("additive sigma_e2={}", a.sigma_e2),
                ),
                ErrorModel::Multiplicative(m) => (
                    m.sigma_u2,
                    m.beta0,
                    format!("multiplicative sigma_u2={}", m.sigma_u2),
                ),
            };
            analyze::analyze_variant(
                &fitted,
                series,
                &err,
                &label,
                variance,
                scale_param,
                lag,
                block_len,
                settings,
                forecast_dates.as_deref(),
                settings.seed.wrapping_add(1 + i as u64),
            )
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

fn emit_analysis(opts: &Opts, report: AnalysisReport) -> Result<(), CliError> {
    let content = match opts.format() {
        Format::Json => report::analysis_json(&report)? + "\n",
        Format::Text => report::analysis_text(&report),
        Format::Csv => report::forecast_csv(&report),
    };
    emit(opts, content)
}

fn run_simulate(opts: Opts) -> Result<(), CliError> {
    let phi: Vec<f64> = opts
        .phi
        .as_deref()
        .unwrap_or("0.5")
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::data("bad --phi list"))?;
    let model = ArModel::new(
        opts.phi0.unwrap_or(0.0),
        phi,
        opts.sigma_eps2.unwrap_or(1.0),
    )
    .map_err(CliError::model)?;
    let mut spec = SimSpec::new(model, opts.length.unwrap_or(200), opts.seed.unwrap_or(1));
    if let Some(b) = opts.burn_in {
        spec = spec.with_burn_in(b);
    }
    let clean = simulate_ar(&spec).map_err(CliError::model)?;
    let series = if opts.error.is_some() {
        let err = opts.single_error_model()?;
        err.contaminate(&clean, spec.seed.wrapping_add(1))
    } else {
        clean
    };
    let start = opts
        .start_date
        .as_deref()
        .map(|s| {
            NaiveDate::parse_from_str(s, "%Y-%m-%d")
                .map_err(|_| CliError::data(format!("bad start-date '{s}'")))
        })
        .transpose()?
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(2020, 1, 1).unwrap());

    // Data-producing command: CSV unless JSON is asked for explicitly.
    let content = match opts.format.as_deref() {
        Some("json") => {
            #[derive(Serialize)]
            struct Sim<'a> {
                start_date: String,
                values: &'a [f64],
            }
            serde_json::to_string_pretty(&Sim {
                start_date: start.to_string(),
                values: series.values(),
            })
            .map_err(|e| CliError::internal(e.to_string()))?
                + "\n"
        }
        _ => {
            let mut out = String::from("date,value\n");
            for (i, v) in series.values().iter().enumerate() {
                out.push_str(&format!("{},{}\n", start + chrono::Days::new(i as u64), v));
            }
            out
        }
    };
    emit(&opts, content)
}

fn run_adf(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let (series, dates) = load_series(&opts)?;
    let (fitted, diff_order, _) = apply_differencing(&series, dates.as_deref(), &settings)?;
    let adf = adf_test(&fitted).map_err(CliError::model)?;

    #[derive(Serialize)]
    struct AdfReport {
        t: usize,
        diff_order: u32,
        statistic: f64,
        p_value: f64,
        lags_used: usize,
        critical_values: [f64; 3],
    }
    let rep = AdfReport {
        t: fitted.len(),
        diff_order,
        statistic: adf.statistic,
        p_value: adf.p_value,
        lags_used: adf.lags_used,
        critical_values: adf.critical_values,
    };
    let content = match opts.format() {
        Format::Text => format!(
            "T: {}  d: {}\nADF statistic: {:.4}\np-value: {:.4}\nlags: {}\ncritical values (1%, 5%, 10%): {:.4}, {:.4}, {:.4}\n",
            rep.t, rep.diff_order, rep.statistic, rep.p_value, rep.lags_used,
            rep.critical_values[0], rep.critical_values[1], rep.critical_values[2]
        ),
        _ => serde_json::to_string_pretty(&rep).map_err(|e| CliError::internal(e.to_string()))? + "\n",
    };
    emit(&opts, content)
}

fn run_select(opts: Opts) -> Result<(), CliError> {
    let settings = opts.settings()?;
    let (series, dates) = load_series(&opts)?;
    let (fitted, diff_order, _) = apply_differencing(&series, dates.as_deref(), &settings)?;
    let p_max = settings
        .max_lag
        .min((fitted.len() / 5).saturating_sub(1))
        .max(1);
    let rows = aic_table(&fitted, p_max).map_err(CliError::model)?;
    let selected = select_lag(&fitted, p_max).map_err(CliError::model)?;

    #[derive(Serialize)]
    struct SelectReport {
        t: usize,
        diff_order: u32,
        aic: Vec<AicRow>,
        selected: usize,
    }
    #[derive(Serialize)]
    struct AicRow {
        p: usize,
        aic: f64,
    }
    let rep = SelectReport {
        t: fitted.len(),
        diff_order,
        aic: rows.iter().map(|&(p, aic)| AicRow { p, aic }).collect(),
        selected,
    };
    let content = match opts.format() {
        Format::Text => {
            let mut out = format!("T: {}  d: {}\n  p        AIC\n", rep.t, rep.diff_order);
            for r in &rep.aic {
                out.push_str(&format!("  {:<3} {:>12.4}\n", r.p, r.aic));
            }
            out.push_str(&format!("selected: {}\n", rep.selected));
            out
        }
        _ => {
            serde_json::to_string_pretty(&rep).map_err(|e| CliError::internal(e.to_string()))?
                + "\n"
        }
    };
    emit(&opts, content)
}
