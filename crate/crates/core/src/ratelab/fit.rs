//! Log–log rate fits over the sample-size grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::replicate::ResultRow;

/// Regressor of a rate fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regressor {
    /// `log((log n) / n)`, for rates of the form `(log n / n)^p`.
    LogNOverN,
    /// `log n`, for pure power rates.
    LogN,
}

impl Regressor {
    pub fn at(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Regressor::LogNOverN => (n.ln() / n).ln(),
            Regressor::LogN => n.ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regressor::LogNOverN => "lognlogn",
            Regressor::LogN => "logn",
        }
    }
}

impl fmt::Display for Regressor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regressor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lognlogn" => Ok(Regressor::LogNOverN),
            "logn" => Ok(Regressor::LogN),
            other => Err(Error::Input(format!("unknown regressor {other:?}"))),
        }
    }
}

/// How replications at one sample size are summarized before fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Median,
    Mean,
}

impl Aggregate {
    /// Moments are expectations; every other statistic is a stochastic order
    /// and is summarized robustly.
    pub fn for_statistic(name: &str) -> Self {
        if name == "moment" {
            Aggregate::Mean
        } else {
            Aggregate::Median
        }
    }

    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            Aggregate::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Aggregate::Median => median(values),
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Ordinary least squares of `log(summary)` on the regressor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// NaN with only two sample sizes.
    pub slope_std_err: f64,
    pub r_squared: f64,
    pub regressor: Regressor,
    pub n_min: usize,
    pub n_max: usize,
}

/// Fits `log(summary_n) = intercept + slope * regressor(n)`.
pub fn fit_power_law(points: &[(usize, f64)], regressor: Regressor) -> Result<RateFit> {
    let mut ns: Vec<usize> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 || ns.len() != points.len() {
        return Err(Error::Fit(
            "need at least two distinct sample sizes, one summary each".into(),
        ));
    }
    if let Some(&(n, v)) = points.iter().find(|p| !(p.1 > 0.0 && p.1.is_finite())) {
        return Err(Error::Fit(format!("summary {v} at n = {n} is not positive")));
    }
    let xs: Vec<f64> = points.iter().map(|p| regressor.at(p.0)).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let slope_std_err = if points.len() > 2 {
        (sse / (k - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    Ok(RateFit {
        slope,
        intercept,
        slope_std_err,
        r_squared,
        regressor,
        n_min: ns[0],
        n_max: ns[ns.len() - 1],
    })
}

/// Per-`n` summaries of a single-group table, in increasing `n`.
pub fn summarize(rows: &[ResultRow], aggregate: Aggregate) -> Vec<(usize, f64)> {
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in rows {
        by_n.entry(r.n).or_default().push(r.value);
    }
    by_n.into_iter().map(|(n, v)| (n, aggregate.apply(&v))).collect()
}

/// Rate fit of a table holding one `(model, statistic)` group; medians per
/// `n`, or means for moment statistics.
pub fn fit_log_rate(rows: &[ResultRow], regressor: Regressor) -> Result<RateFit> {
    let Some(first) = rows.first() else {
        return Err(Error::Fit("empty table".into()));
    };
    if rows
        .iter()
        .any(|r| r.model != first.model || r.statistic != first.statistic)
    {
        return Err(Error::Fit("table mixes several model/statistic groups".into()));
    }
    fit_power_law(&summarize(rows, Aggregate::for_statistic(&first.statistic)), regressor)
}
