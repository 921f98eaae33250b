//! Seeded Monte Carlo experiments: model generators, per-replication
//! statistics and log–log rate fits.
//!
//! Every replication draws its data from a stream seeded by
//! [`sub_seed`]`(seed, n, rep)`, so results do not depend on how the
//! replications are scheduled.

mod fit;
mod model;
mod plan;
mod replicate;

pub use fit::{fit_log_rate, fit_power_law, median, summarize, Aggregate, RateFit, Regressor};
pub use model::{Cumulative, Dataset, ErrorLaw, ModelSpec, TimeChange};
pub use plan::{localization_scale, sub_seed, EpsilonRule, ExperimentPlan, Statistic, DEFAULT_GRID_CELLS};
pub use replicate::{
    localization_probability, nested_gaps, replicate, replication_statistic, run_experiment, Checks,
    LocalizationEstimate, NestedGaps, Replication, ResultRow, ResultTable,
};
