//! Per-replication statistics and the experiment driver.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::{windowed_majorant, Graph, PolylineEnvelope};
use crate::monotone::{bandwidth_holder, discrepancy_stat, grenander_decompose, Biweight};
use crate::naive::uniform_grid;

use super::model::{Cumulative, ModelSpec};
use super::plan::{localization_scale, sub_seed, ExperimentPlan, Statistic};

/// Diagnostics evaluated on every replication over the evaluation grid
/// (all knots of the naive estimate plus the equispaced grid).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checks {
    /// `max |F̂_n - F|`.
    pub majorant_distance: f64,
    /// `max |F_n - F|`, including left limits.
    pub naive_distance: f64,
    /// `min (F̂_n - F_n)`, including left limits.
    pub domination_margin: f64,
}

impl Checks {
    /// The majorant is no farther from the concave target than the naive
    /// estimate is.
    pub fn marshall_holds(&self) -> bool {
        self.majorant_distance <= self.naive_distance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Replication {
    pub n: usize,
    pub rep: usize,
    pub value: f64,
    pub checks: Checks,
}

/// Pointwise, local and global gaps of one replication, computed over nested
/// candidate sets so that `pointwise <= local <= global` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedGaps {
    pub pointwise: f64,
    pub local: f64,
    pub global: f64,
}

struct Fitted {
    cumulative: Cumulative,
    majorant: PolylineEnvelope,
}

fn fit(plan: &ExperimentPlan, n: usize, rep: usize) -> Result<Fitted> {
    let data = plan.model.sample(n, sub_seed(plan.seed, n, rep))?;
    let cumulative = data.cumulative()?;
    let majorant = cumulative.majorant();
    Ok(Fitted { cumulative, majorant })
}

/// Supremum of `env - cum` over the candidates of `[lo, hi]` and any extra
/// probe abscissae inside it.
fn gap_over(cum: &Cumulative, env: &PolylineEnvelope, lo: f64, hi: f64, probes: &[f64]) -> Result<f64> {
    let mut gap = cum.sup_gap_on(env, lo, hi)?.gap;
    for &p in probes.iter().filter(|&&p| p >= lo && p <= hi) {
        gap = gap.max(env.eval_unchecked(p) - cum.value_at(p));
    }
    Ok(gap)
}

fn window(cum: &Cumulative, center: f64, halfwidth: f64) -> (f64, f64) {
    let (a, b) = cum.domain();
    ((center - halfwidth).max(a), (center + halfwidth).min(b))
}

fn checks(model: &ModelSpec, cum: &Cumulative, env: &PolylineEnvelope, cells: usize) -> Checks {
    let mut out = Checks {
        majorant_distance: 0.0,
        naive_distance: 0.0,
        domination_margin: f64::INFINITY,
    };
    let mut visit = |x: f64, values: [f64; 2]| {
        let target = model.target(x);
        let e = env.eval_unchecked(x);
        out.majorant_distance = out.majorant_distance.max((e - target).abs());
        for y in values {
            out.naive_distance = out.naive_distance.max((y - target).abs());
            out.domination_margin = out.domination_margin.min(e - y);
        }
    };
    match cum {
        Cumulative::Step(s) => {
            visit(s.lower(), [s.base_value(); 2]);
            let mut before = s.base_value();
            for (&x, &to) in s.jump_x().iter().zip(s.jump_to()) {
                visit(x, [before, to]);
                before = to;
            }
        }
        Cumulative::Path(p) => {
            for q in p.points() {
                visit(q.x, [q.y; 2]);
            }
        }
    }
    let (a, b) = cum.domain();
    for x in uniform_grid(a, b, cells) {
        visit(x, [cum.value_at(x), cum.left_limit(x)]);
    }
    out
}

fn localization_indicator(plan: &ExperimentPlan, n: usize, c0: f64, fitted: &Fitted) -> Result<f64> {
    let cum = &fitted.cumulative;
    let (a, b) = cum.domain();
    let halfwidth = 2.0 * localization_scale(c0, n, plan.model.tau());
    for x in uniform_grid(a, b, plan.grid_cells) {
        let (lo, hi) = window(cum, x, halfwidth);
        if lo == a && hi == b {
            continue;
        }
        let global = fitted.majorant.eval_unchecked(x);
        let local = windowed_majorant(cum, x, halfwidth)?.evaluate(x)?;
        // Vertex sets agree exactly; the slack only absorbs re-interpolation
        // through a vertex that the window made collinear.
        if (local - global).abs() > 1e-12 * (1.0 + global.abs()) {
            return Ok(1.0);
        }
    }
    Ok(0.0)
}

/// One replication: the statistic of `plan` plus its diagnostics.
pub fn replicate(plan: &ExperimentPlan, n: usize, rep: usize) -> Result<Replication> {
    let fitted = fit(plan, n, rep)?;
    let cum = &fitted.cumulative;
    let env = &fitted.majorant;
    let (a, b) = cum.domain();
    let value = match plan.statistic {
        Statistic::Global => gap_over(cum, env, a, b, &[])?,
        Statistic::Moment { order } => gap_over(cum, env, a, b, &[])?.powf(order),
        Statistic::Pointwise { x0 } => env.evaluate(x0)? - cum.value_at(x0),
        Statistic::Local { x0, epsilon } => {
            let (lo, hi) = window(cum, x0, epsilon.at(n));
            gap_over(cum, env, lo, hi, &[x0])?
        }
        Statistic::Localization { c0 } => localization_indicator(plan, n, c0, &fitted)?,
        Statistic::Smoothing { bandwidth, order } => {
            let step = cum
                .as_step()
                .ok_or_else(|| Error::Input("smoothing needs a step-valued model".into()))?;
            let mono = grenander_decompose(env)?;
            let h = bandwidth_holder(&bandwidth, n)?;
            let grid = uniform_grid(a, b, plan.grid_cells);
            discrepancy_stat(&mono, step, &Biweight, h, order, &grid)?
        }
    };
    Ok(Replication {
        n,
        rep,
        value,
        checks: checks(&plan.model, cum, env, plan.grid_cells),
    })
}

/// The statistic of replication `rep` at sample size `n`.
pub fn replication_statistic(plan: &ExperimentPlan, n: usize, rep: usize) -> Result<f64> {
    Ok(replicate(plan, n, rep)?.value)
}

/// Pointwise, local and global gaps of one replication of a `Local` plan.
pub fn nested_gaps(plan: &ExperimentPlan, n: usize, rep: usize) -> Result<NestedGaps> {
    let Statistic::Local { x0, epsilon } = plan.statistic else {
        return Err(Error::Input("nested gaps need a local statistic".into()));
    };
    let fitted = fit(plan, n, rep)?;
    let cum = &fitted.cumulative;
    let env = &fitted.majorant;
    let (a, b) = cum.domain();
    let (lo, hi) = window(cum, x0, epsilon.at(n));
    Ok(NestedGaps {
        pointwise: env.evaluate(x0)? - cum.value_at(x0),
        local: gap_over(cum, env, lo, hi, &[x0])?,
        global: gap_over(cum, env, a, b, &[lo, x0, hi])?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub model: String,
    pub statistic: String,
    pub n: usize,
    pub rep: usize,
    pub value: f64,
    /// Present for rows produced in-process; absent for rows read from disk.
    pub checks: Option<Checks>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn values_at(&self, n: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.n == n).map(|r| r.value).collect()
    }

    pub fn checks(&self) -> impl Iterator<Item = &Checks> {
        self.rows.iter().filter_map(|r| r.checks.as_ref())
    }
}

/// Runs every `(n, rep)` replication, in parallel, and returns rows ordered
/// by `n` then `rep`.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ResultTable> {
    plan.validate()?;
    let tasks: Vec<(usize, usize)> = plan
        .n_grid
        .iter()
        .flat_map(|&n| (0..plan.reps).map(move |r| (n, r)))
        .collect();
    let reps = tasks
        .par_iter()
        .map(|&(n, r)| replicate(plan, n, r))
        .collect::<Result<Vec<_>>>()?;
    let model = plan.model.name().to_string();
    let statistic = plan.statistic.name().to_string();
    Ok(ResultTable {
        rows: reps
            .into_iter()
            .map(|r| ResultRow {
                model: model.clone(),
                statistic: statistic.clone(),
                n: r.n,
                rep: r.rep,
                value: r.value,
                checks: Some(r.checks),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizationEstimate {
    pub probability: f64,
    pub std_err: f64,
    pub reps: usize,
}

/// Share of replications whose localized majorant disagrees with the global
/// one, with its binomial standard error.
pub fn localization_probability(plan: &ExperimentPlan, n: usize) -> Result<LocalizationEstimate> {
    if !matches!(plan.statistic, Statistic::Localization { .. }) {
        return Err(Error::Input(
            "localization probability needs a localization plan".into(),
        ));
    }
    let mut single = plan.clone();
    single.n_grid = vec![n];
    let table = run_experiment(&single)?;
    let reps = table.len();
    let p = table.rows.iter().map(|r| r.value).sum::<f64>() / reps as f64;
    Ok(LocalizationEstimate {
        probability: p,
        std_err: (p * (1.0 - p) / reps as f64).sqrt(),
        reps,
    })
}
