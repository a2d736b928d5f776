//! Report rendering: deterministic JSON for machines, aligned text for
//! humans, CSV for forecast points.

use crate::analyze::{AnalysisReport, FitReport, VariantReport};
use crate::CliError;
use std::fmt::Write as _;

pub fn analysis_json(report: &AnalysisReport) -> Result<String, CliError> {
    serde_json::to_string_pretty(report)
        .map_err(|e| CliError::internal(format!("serialize report: {e}")))
}

pub fn fit_json(report: &FitReport) -> Result<String, CliError> {
    serde_json::to_string_pretty(report)
        .map_err(|e| CliError::internal(format!("serialize report: {e}")))
}

pub fn analysis_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "observations: {}", report.t);
    if let Some(origin) = &report.origin {
        let _ = writeln!(out, "origin: {origin}");
    }
    if let Some(s) = &report.screening {
        let _ = writeln!(
            out,
            "screening: d={} (ADF stat {:.4}, p {:.4}, lags {}{})",
            s.diff_order,
            s.adf_statistic,
            s.adf_p_value,
            s.adf_lags,
            if s.warning {
                ", WARNING: no order rejected"
            } else {
                ""
            }
        );
    }
    let _ = writeln!(
        out,
        "differencing: {}   lag: {}   block length: {}   bootstrap reps: {}   seed: {}",
        report.diff_order, report.lag, report.block_len, report.boot_reps, report.seed
    );
    let _ = writeln!(out);
    render_variant(&mut out, &report.naive, report.level);
    for v in &report.variants {
        render_variant(&mut out, v, report.level);
    }
    out
}

fn render_variant(out: &mut String, v: &VariantReport, level: f64) {
    let _ = writeln!(out, "== {} ==", v.label);
    if let Some(f) = &v.failure {
        let _ = writeln!(out, "  SKIPPED: {f}");
        let _ = writeln!(out);
        return;
    }
    if v.nonstationary_warning {
        let _ = writeln!(out, "  warning: corrected coefficients not stationary");
    }
    let _ = writeln!(
        out,
        "  {:<12} {:>12} {:>12} {:>10}",
        "parameter", "EST", "SE", "p-value"
    );
    for p in &v.params {
        let se =
            p.se.map(|s| format!("{s:>12.6}"))
                .unwrap_or_else(|| format!("{:>12}", "-"));
        let pv = p
            .p_value
            .map(|x| format!("{x:>10.4}"))
            .unwrap_or_else(|| format!("{:>10}", "-"));
        let _ = writeln!(out, "  {:<12} {:>12.6} {} {}", p.name, p.est, se, pv);
    }
    for block in [&v.forecast_fitted, &v.forecast_level]
        .into_iter()
        .flatten()
    {
        let _ = writeln!(
            out,
            "  forecast ({} scale, {:.0}% intervals):",
            block.scale,
            level * 100.0
        );
        let _ = writeln!(
            out,
            "    {:<4} {:<12} {:>12} {:>12} {:>12} {:>12}",
            "h", "date", "point", "P_e", "lo", "hi"
        );
        for pt in &block.points {
            let date = pt.date.clone().unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "    {:<4} {:<12} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                pt.h, date, pt.point, pt.pe, pt.lo, pt.hi
            );
        }
        let _ = writeln!(out, "    total P_e: {:.6}", block.total_pe);
    }
    let _ = writeln!(out);
}

/// Forecast points as CSV rows `date,point,pe,lo,hi,variant`; the fitted
/// scale is emitted when no level-scale block exists, the level scale
/// otherwise.
pub fn forecast_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("date,point,pe,lo,hi,variant\n");
    let mut emit = |v: &VariantReport| {
        let block = v.forecast_level.as_ref().or(v.forecast_fitted.as_ref());
        if let Some(b) = block {
            for pt in &b.points {
                let date = pt.date.clone().unwrap_or_else(|| format!("h{}", pt.h));
                let _ = writeln!(
                    out,
                    "{date},{},{},{},{},{}",
                    fmt(pt.point),
                    fmt(pt.pe),
                    fmt(pt.lo),
                    fmt(pt.hi),
                    v.label
                );
            }
        }
    };
    emit(&report.naive);
    for v in &report.variants {
        emit(v);
    }
    out
}

pub fn fit_text(report: &FitReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "observations: {}   lag: {}", report.t, report.lag);
    for (name, rows) in [
        ("least squares", &report.least_squares),
        ("estimating equations", &report.estimating_equations),
    ] {
        let _ = writeln!(out, "== {name} ==");
        for p in rows {
            let _ = writeln!(out, "  {:<12} {:>12.6}", p.name, p.est);
        }
    }
    let _ = writeln!(out, "max componentwise gap: {:.6e}", report.equivalence_gap);
    out
}

fn fmt(v: f64) -> String {
    format!("{v:.6}")
}
