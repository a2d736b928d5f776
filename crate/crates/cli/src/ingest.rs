//! CSV ingestion and mortality-rate construction.
//!
//! Two layouts are accepted: `date,cases,deaths` with cumulative counts, or a
//! generic `date,value` series. Dates are ISO-8601 and must strictly
//! increase; cumulative counts must be non-negative and non-decreasing.

use crate::CliError;
use chrono::NaiveDate;
use errts_core::Series;

/// One row per day of cumulative confirmed cases and deaths.
#[derive(Debug, Clone)]
pub struct EpidemicTable {
    pub dates: Vec<NaiveDate>,
    pub cases: Vec<f64>,
    pub deaths: Vec<f64>,
}

/// Which counts enter the rate: cumulative totals (default) or day-over-day
/// increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountBasis {
    Cumulative,
    Daily,
}

/// Result of reading a file that may be either layout.
#[derive(Debug)]
pub enum Ingested {
    Table(EpidemicTable),
    Values(Series),
}

pub fn ingest(path: &str) -> Result<Ingested, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {path}: {e}")))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::data(format!("{path}: empty file")))?;
    let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
    match cols.as_slice() {
        ["date", "cases", "deaths"] => {
            let mut dates = Vec::new();
            let mut cases = Vec::new();
            let mut deaths = Vec::new();
            for (idx, line) in lines {
                if line.trim().is_empty() {
                    continue;
                }
                let lineno = idx + 1;
                let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
                if fields.len() != 3 {
                    return Err(CliError::data(format!(
                        "{path}:{lineno}: expected 3 fields, found {}",
                        fields.len()
                    )));
                }
                let date = parse_date(path, lineno, fields[0])?;
                let c = parse_count(path, lineno, "cases", fields[1])?;
                let d = parse_count(path, lineno, "deaths", fields[2])?;
                if let Some(&prev) = dates.last() {
                    if date <= prev {
                        return Err(CliError::data(format!(
                            "{path}:{lineno}: dates must strictly increase ({date} after {prev})"
                        )));
                    }
                }
                if let Some(&prev) = cases.last() {
                    if c < prev {
                        return Err(CliError::data(format!(
                            "{path}:{lineno}: cumulative cases decreased ({c} after {prev})"
                        )));
                    }
                }
                if let Some(&prev) = deaths.last() {
                    if d < prev {
                        return Err(CliError::data(format!(
                            "{path}:{lineno}: cumulative deaths decreased ({d} after {prev})"
                        )));
                    }
                }
                dates.push(date);
                cases.push(c);
                deaths.push(d);
            }
            if dates.is_empty() {
                return Err(CliError::data(format!("{path}: no data rows")));
            }
            Ok(Ingested::Table(EpidemicTable {
                dates,
                cases,
                deaths,
            }))
        }
        ["date", "value"] => {
            let mut dates = Vec::new();
            let mut values = Vec::new();
            for (idx, line) in lines {
                if line.trim().is_empty() {
                    continue;
                }
                let lineno = idx + 1;
                let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
                if fields.len() != 2 {
                    return Err(CliError::data(format!(
                        "{path}:{lineno}: expected 2 fields, found {}",
                        fields.len()
                    )));
                }
                let date = parse_date(path, lineno, fields[0])?;
                let v: f64 = fields[1].parse().map_err(|_| {
                    CliError::data(format!("{path}:{lineno}: bad value '{}'", fields[1]))
                })?;
                if !v.is_finite() {
                    return Err(CliError::data(format!("{path}:{lineno}: non-finite value")));
                }
                if let Some(&prev) = dates.last() {
                    if date <= prev {
                        return Err(CliError::data(format!(
                            "{path}:{lineno}: dates must strictly increase"
                        )));
                    }
                }
                dates.push(date);
                values.push(v);
            }
            if values.is_empty() {
                return Err(CliError::data(format!("{path}: no data rows")));
            }
            let series = Series::new(values)
                .map_err(|e| CliError::data(format!("{path}: {e}")))?
                .with_origin(dates[0].to_string());
            Ok(Ingested::Values(series))
        }
        _ => Err(CliError::data(format!(
            "{path}: header must be 'date,cases,deaths' or 'date,value', found '{header}'"
        ))),
    }
}

fn parse_date(path: &str, lineno: usize, field: &str) -> Result<NaiveDate, CliError> {
    NaiveDate::parse_from_str(field, "%Y-%m-%d")
        .map_err(|_| CliError::data(format!("{path}:{lineno}: bad date '{field}'")))
}

fn parse_count(path: &str, lineno: usize, what: &str, field: &str) -> Result<f64, CliError> {
    let v: f64 = field
        .parse()
        .map_err(|_| CliError::data(format!("{path}:{lineno}: bad {what} '{field}'")))?;
    if !v.is_finite() || v < 0.0 {
        return Err(CliError::data(format!(
            "{path}:{lineno}: {what} must be a non-negative number"
        )));
    }
    Ok(v)
}

/// Mortality rate in percent: `100 * deaths[t] / cases[t-k]` with offset
/// k = 14, 10, 0 for definitions 1, 2, 3. The first k rows are dropped.
pub fn mortality_rate(
    table: &EpidemicTable,
    definition: u8,
    basis: CountBasis,
) -> Result<(Series, Vec<NaiveDate>), CliError> {
    let offset = match definition {
        1 => 14usize,
        2 => 10,
        3 => 0,
        other => {
            return Err(CliError::data(format!(
                "definition must be 1, 2, or 3, got {other}"
            )))
        }
    };
    let (cases, deaths): (Vec<f64>, Vec<f64>) = match basis {
        CountBasis::Cumulative => (table.cases.clone(), table.deaths.clone()),
        CountBasis::Daily => (daily(&table.cases), daily(&table.deaths)),
    };
    let skip = match basis {
        CountBasis::Cumulative => 0,
        CountBasis::Daily => 1, // first daily increment is undefined
    };
    let t = cases.len();
    if t <= offset + skip {
        return Err(CliError::data(format!(
            "need more than {} rows for definition {definition}",
            offset + skip
        )));
    }
    let mut values = Vec::with_capacity(t - offset - skip);
    let mut dates = Vec::with_capacity(t - offset - skip);
    for t_idx in (offset + skip)..t {
        let denom = cases[t_idx - offset];
        if denom == 0.0 {
            return Err(CliError::data(format!(
                "zero case count at {} (denominator for {})",
                table.dates[t_idx - offset],
                table.dates[t_idx]
            )));
        }
        values.push(100.0 * deaths[t_idx] / denom);
        dates.push(table.dates[t_idx]);
    }
    let series = Series::new(values)
        .map_err(|e| CliError::data(e.to_string()))?
        .with_origin(dates[0].to_string());
    Ok((series, dates))
}

fn daily(cumulative: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(cumulative.len());
    out.push(f64::NAN); // placeholder, skipped by the caller
    for w in cumulative.windows(2) {
        out.push(w[1] - w[0]);
    }
    out
}
