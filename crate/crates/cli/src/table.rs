//! Result and report CSV files.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use monoshape::ratelab::{fit_log_rate, Regressor, ResultRow};

use crate::CliError;

pub const RESULTS_HEADER: [&str; 5] = ["model", "statistic", "n", "rep", "value"];
pub const REPORT_HEADER: [&str; 8] = ["model", "statistic", "slope", "stderr", "r2", "n_min", "n_max", "reps"];

/// Plain decimal with 17 significant digits, independent of locale.
pub fn decimal17(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.16e}", v.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if v.is_sign_negative() && v != 0.0 { "-" } else { "" };
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else if (exp as usize) < digits.len() - 1 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("{digits}{}", "0".repeat(exp as usize + 1 - digits.len()))
    };
    format!("{sign}{body}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn io(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_results<W: Write>(out: W, rows: &[ResultRow]) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(RESULTS_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.model.as_str(),
            r.statistic.as_str(),
            &r.n.to_string(),
            &r.rep.to_string(),
            &decimal17(r.value),
        ])
        .map_err(io)?;
    }
    finish(w)
}

pub fn read_results<R: Read>(input: R) -> Result<Vec<ResultRow>, CliError> {
    let malformed = |line: u64, msg: String| CliError::Usage(format!("malformed results CSV, line {line}: {msg}"));
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut records = r.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(RESULTS_HEADER) => {}
        Some(Ok(h)) => {
            return Err(malformed(
                1,
                format!(
                    "expected header `{}`, found `{}`",
                    RESULTS_HEADER.join(","),
                    h.iter().collect::<Vec<_>>().join(",")
                ),
            ))
        }
        Some(Err(e)) => return Err(csv_read_error(e)),
        None => return Err(malformed(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(csv_read_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("");
        let n = field(2)
            .parse()
            .map_err(|_| malformed(line, format!("bad n `{}`", field(2))))?;
        let rep = field(3)
            .parse()
            .map_err(|_| malformed(line, format!("bad rep `{}`", field(3))))?;
        let value: f64 = field(4)
            .parse()
            .map_err(|_| malformed(line, format!("bad value `{}`", field(4))))?;
        if field(0).is_empty() || field(1).is_empty() {
            return Err(malformed(line, "empty model or statistic".into()));
        }
        rows.push(ResultRow {
            model: field(0).to_string(),
            statistic: field(1).to_string(),
            n,
            rep,
            value,
            checks: None,
        });
    }
    Ok(rows)
}

fn csv_read_error(e: csv::Error) -> CliError {
    match e.kind() {
        csv::ErrorKind::Io(_) => CliError::Io(e.to_string()),
        _ => CliError::Usage(format!("malformed results CSV: {e}")),
    }
}

/// One report line; the fit fields are `None` for degenerate groups.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub model: String,
    pub statistic: String,
    pub fit: Option<(f64, f64, f64)>,
    pub n_min: usize,
    pub n_max: usize,
    pub reps: usize,
    pub warning: Option<String>,
}

/// Groups rows by `(model, statistic)` in order of first appearance and fits
/// each group.
pub fn build_report(rows: &[ResultRow], regressor: Regressor) -> Vec<ReportRow> {
    let mut order: Vec<(String, String)> = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<ResultRow>> = BTreeMap::new();
    for r in rows {
        let key = (r.model.clone(), r.statistic.clone());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r.clone());
    }
    order
        .into_iter()
        .map(|key| {
            let group = &groups[&key];
            let mut per_n: BTreeMap<usize, usize> = BTreeMap::new();
            for r in group {
                *per_n.entry(r.n).or_default() += 1;
            }
            let n_min = *per_n.keys().next().expect("non-empty group");
            let n_max = *per_n.keys().next_back().expect("non-empty group");
            let reps = *per_n.values().min().expect("non-empty group");
            let (fit, warning) = if per_n.len() < 2 {
                (
                    None,
                    Some(format!("only one sample size (n = {n_min}); no slope fitted")),
                )
            } else {
                match fit_log_rate(group, regressor) {
                    Ok(f) => (Some((f.slope, f.slope_std_err, f.r_squared)), None),
                    Err(e) => (None, Some(e.to_string())),
                }
            };
            ReportRow {
                model: key.0,
                statistic: key.1,
                fit,
                n_min,
                n_max,
                reps,
                warning,
            }
        })
        .collect()
}

fn optional(v: f64) -> String {
    if v.is_finite() {
        decimal17(v)
    } else {
        String::new()
    }
}

pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(REPORT_HEADER).map_err(io)?;
    for r in rows {
        let (slope, se, r2) = match r.fit {
            Some((s, e, q)) => (optional(s), optional(e), optional(q)),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            r.model.as_str(),
            r.statistic.as_str(),
            &slope,
            &se,
            &r2,
            &r.n_min.to_string(),
            &r.n_max.to_string(),
            &r.reps.to_string(),
        ])
        .map_err(io)?;
    }
    finish(w)
}
