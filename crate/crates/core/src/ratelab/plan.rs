use crate::error::{Error, Result};
use crate::monotone::{bandwidth_holder, BandwidthRule, Order};

use super::model::ModelSpec;

/// `ε_n = scale * n^{-exponent}`, the half-width of the local window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonRule {
    pub scale: f64,
    pub exponent: f64,
}

impl Default for EpsilonRule {
    fn default() -> Self {
        Self {
            scale: 1.0,
            exponent: 1.0 / 3.0,
        }
    }
}

impl EpsilonRule {
    pub fn at(&self, n: usize) -> f64 {
        self.scale * (n as f64).powf(-self.exponent)
    }

    /// Smallest admissible half-width, `(log n / n)^{1/(4-τ)}`.
    pub fn lower_bound(n: usize, tau: f64) -> f64 {
        let n = n as f64;
        (n.ln() / n).powf(1.0 / (4.0 - tau))
    }

    pub fn meets_lower_bound(&self, n: usize, tau: f64) -> bool {
        self.at(n) >= Self::lower_bound(n, tau)
    }
}

/// Localization scale `c_n = (c0 log n / n)^{1/(4-τ)}`.
pub fn localization_scale(c0: f64, n: usize, tau: f64) -> f64 {
    let n = n as f64;
    (c0 * n.ln() / n).powf(1.0 / (4.0 - tau))
}

/// The per-replication quantity an experiment records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Statistic {
    /// `sup |F̂_n - F_n|` over the domain.
    Global,
    /// Supremum over `|x - x0| <= ε_n`.
    Local { x0: f64, epsilon: EpsilonRule },
    /// `F̂_n(x0) - F_n(x0)`.
    Pointwise { x0: f64 },
    /// Global gap raised to the power `order`.
    Moment { order: f64 },
    /// 1 when the global majorant and the majorant localized to
    /// `[x - 2c_n, x + 2c_n]` disagree at some equispaced abscissa `x`.
    Localization { c0: f64 },
    /// `sup |f̂_ns^{(l)} - f̃_n^{(l)}|` with the biweight kernel.
    Smoothing { bandwidth: BandwidthRule, order: Order },
}

impl Statistic {
    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Global => "global",
            Statistic::Local { .. } => "local",
            Statistic::Pointwise { .. } => "pointwise",
            Statistic::Moment { .. } => "moment",
            Statistic::Localization { .. } => "localization",
            Statistic::Smoothing { .. } => "smoothing",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub model: ModelSpec,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub statistic: Statistic,
    /// Number of equispaced cells of the evaluation grid.
    pub grid_cells: usize,
}

pub const DEFAULT_GRID_CELLS: usize = 1024;

impl ExperimentPlan {
    pub fn new(model: ModelSpec, n_grid: Vec<usize>, reps: usize, seed: u64, statistic: Statistic) -> Self {
        Self {
            model,
            n_grid,
            reps,
            seed,
            statistic,
            grid_cells: DEFAULT_GRID_CELLS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(msg));
        self.model.validate()?;
        if self.n_grid.is_empty() {
            return bad("the n-grid is empty".into());
        }
        if self.n_grid.iter().any(|&n| n < 2) {
            return bad("sample sizes must be at least 2".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("the n-grid must be strictly increasing".into());
        }
        if self.reps == 0 {
            return bad("at least one replication is required".into());
        }
        if self.grid_cells == 0 {
            return bad("the evaluation grid needs at least one cell".into());
        }
        let (a, b) = self.model.domain();
        match self.statistic {
            Statistic::Global => {}
            Statistic::Local { x0, epsilon } => {
                if !(x0 >= a && x0 <= b) {
                    return bad(format!("x0 = {x0} outside [{a}, {b}]"));
                }
                if !(epsilon.scale > 0.0 && epsilon.scale.is_finite() && epsilon.exponent.is_finite()) {
                    return bad("epsilon rule must have a positive scale".into());
                }
            }
            Statistic::Pointwise { x0 } => {
                if !(x0 >= a && x0 <= b) {
                    return bad(format!("x0 = {x0} outside [{a}, {b}]"));
                }
            }
            Statistic::Moment { order } => {
                if !(order >= 1.0 && order.is_finite()) {
                    return bad(format!("moment order {order} must be at least 1"));
                }
            }
            Statistic::Localization { c0 } => {
                if !(c0 > 0.0 && c0.is_finite()) {
                    return bad(format!("c0 = {c0} must be positive"));
                }
            }
            Statistic::Smoothing { bandwidth, .. } => {
                if !self.model.is_step() {
                    return bad(format!(
                        "the smoothing statistic needs a step-valued model, not {}",
                        self.model.name()
                    ));
                }
                for &n in &self.n_grid {
                    let h = bandwidth_holder(&bandwidth, n)?;
                    if 2.0 * h > b - a {
                        return bad(format!("bandwidth {h} at n = {n} is too wide for [{a}, {b}]"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Local windows narrower than `(log n / n)^{1/(4-τ)}`, as `(n, ε_n)`.
    pub fn epsilon_warnings(&self) -> Vec<(usize, f64)> {
        match self.statistic {
            Statistic::Local { epsilon, .. } => self
                .n_grid
                .iter()
                .filter(|&&n| !epsilon.meets_lower_bound(n, self.model.tau()))
                .map(|&n| (n, epsilon.at(n)))
                .collect(),
            _ => Vec::new(),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replication `rep` at sample size `n`:
/// `splitmix64(splitmix64(splitmix64(seed) ^ n) ^ rep)`.
pub fn sub_seed(seed: u64, n: usize, rep: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ n as u64) ^ rep as u64)
}
