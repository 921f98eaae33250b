//! `key = value` run configuration.
//!
//! ```text
//! # density model, global gap
//! model.variant = density
//! experiment.statistic = global
//! experiment.n_grid = 2^10, 2^11, 4096
//! experiment.reps = 200
//! experiment.seed = 7
//! ```

use std::collections::BTreeMap;

use monoshape::monotone::{BandwidthRule, Order};
use monoshape::naive::{DriverKind, TrueCurve};
use monoshape::ratelab::{EpsilonRule, ErrorLaw, ExperimentPlan, ModelSpec, Statistic, TimeChange, DEFAULT_GRID_CELLS};

use crate::CliError;

const KEYS: &[&str] = &[
    "model.variant",
    "model.lower",
    "model.upper",
    "model.intercept",
    "model.slope",
    "model.noise",
    "model.noise_scale",
    "model.censoring_rate",
    "model.driver",
    "model.time_change",
    "model.time_change_rate",
    "model.cells",
    "experiment.statistic",
    "experiment.n_grid",
    "experiment.reps",
    "experiment.seed",
    "experiment.grid_cells",
    "experiment.x0",
    "experiment.epsilon_scale",
    "experiment.epsilon_exponent",
    "experiment.c0",
    "experiment.moment_order",
    "experiment.bandwidth_alpha",
    "experiment.bandwidth_scale",
    "experiment.order",
];

/// Parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub plan: ExperimentPlan,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("line {lineno}: expected `key = value`")));
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!("line {lineno}: unknown key `{key}`")));
            }
            if map
                .insert(key.to_string(), (lineno, value.trim().to_string()))
                .is_some()
            {
                return Err(CliError::Usage(format!("line {lineno}: duplicate key `{key}`")));
            }
        }
        Ok(Self { map })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn required(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::Usage(format!("missing required key `{key}`")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.raw(key).map(|v| parse_value(key, v)).transpose()
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    /// Rejects keys that the chosen variant or statistic does not read.
    fn forbid(&self, keys: &[&str], context: &str) -> Result<(), CliError> {
        match keys.iter().find(|k| self.map.contains_key(**k)) {
            Some(k) => Err(CliError::Usage(format!("key `{k}` does not apply to {context}"))),
            None => Ok(()),
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("key `{key}`: cannot parse `{value}`")))
}

/// Comma-separated sizes; `2^k` is accepted for powers of two.
fn parse_grid(value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            let n = match tok.split_once('^') {
                Some((base, exp)) => {
                    let base: usize = parse_value("experiment.n_grid", base.trim())?;
                    let exp: u32 = parse_value("experiment.n_grid", exp.trim())?;
                    base.checked_pow(exp)
                        .ok_or_else(|| CliError::Usage(format!("experiment.n_grid: `{tok}` overflows")))?
                }
                None => parse_value("experiment.n_grid", tok)?,
            };
            Ok(n)
        })
        .collect()
}

const TIME_KEYS: &[&str] = &[
    "model.driver",
    "model.time_change",
    "model.time_change_rate",
    "model.cells",
];
const NOISE_KEYS: &[&str] = &["model.noise", "model.noise_scale"];

fn model(e: &Entries) -> Result<ModelSpec, CliError> {
    let variant = e.required("model.variant")?;
    let (lower, upper, intercept, slope) = match variant {
        "density" | "surrogate" => (0.0, 1.0, 1.5, -1.0),
        "regression" | "primitive" => (0.0, 1.0, 2.0, -1.0),
        "censoring" => (0.0, 0.9, 2.0, -1.0),
        other => return Err(CliError::Usage(format!("model.variant: unknown variant `{other}`"))),
    };
    let curve = TrueCurve::linear(
        e.or("model.lower", lower)?,
        e.or("model.upper", upper)?,
        e.or("model.intercept", intercept)?,
        e.or("model.slope", slope)?,
    )
    .map_err(|err| CliError::Usage(format!("model curve: {err}")))?;
    let errors = || -> Result<ErrorLaw, CliError> {
        let scale = e.or("model.noise_scale", 1.0)?;
        match e.raw("model.noise").unwrap_or("gaussian") {
            "gaussian" => Ok(ErrorLaw::Gaussian { sd: scale }),
            "uniform" => Ok(ErrorLaw::Uniform { half_width: scale }),
            other => Err(CliError::Usage(format!("model.noise: unknown law `{other}`"))),
        }
    };
    let context = format!("model variant {variant}");
    let spec = match variant {
        "density" => {
            e.forbid(NOISE_KEYS, &context)?;
            e.forbid(TIME_KEYS, &context)?;
            e.forbid(&["model.censoring_rate"], &context)?;
            ModelSpec::Density { curve }
        }
        "regression" | "primitive" => {
            e.forbid(TIME_KEYS, &context)?;
            e.forbid(&["model.censoring_rate"], &context)?;
            if variant == "regression" {
                ModelSpec::Regression {
                    curve,
                    errors: errors()?,
                }
            } else {
                ModelSpec::Primitive {
                    curve,
                    errors: errors()?,
                }
            }
        }
        "censoring" => {
            e.forbid(NOISE_KEYS, &context)?;
            e.forbid(TIME_KEYS, &context)?;
            ModelSpec::Censoring {
                curve,
                censoring_rate: e.or("model.censoring_rate", 1.0)?,
            }
        }
        _ => {
            e.forbid(NOISE_KEYS, &context)?;
            e.forbid(&["model.censoring_rate"], &context)?;
            let driver = match e.raw("model.driver").unwrap_or("bridge") {
                "bridge" => DriverKind::Bridge,
                "motion" => DriverKind::Motion,
                other => return Err(CliError::Usage(format!("model.driver: unknown driver `{other}`"))),
            };
            let time_change = match e.raw("model.time_change").unwrap_or("cumulative") {
                "cumulative" => {
                    e.forbid(&["model.time_change_rate"], "a cumulative time change")?;
                    TimeChange::Cumulative
                }
                "linear" => TimeChange::Linear {
                    rate: e.or("model.time_change_rate", 1.0)?,
                },
                other => return Err(CliError::Usage(format!("model.time_change: unknown kind `{other}`"))),
            };
            ModelSpec::Surrogate {
                curve,
                driver,
                time_change,
                cells: e.parsed("model.cells")?,
            }
        }
    };
    Ok(spec)
}

fn statistic(e: &Entries) -> Result<Statistic, CliError> {
    let name = e.required("experiment.statistic")?;
    let all = [
        "experiment.x0",
        "experiment.epsilon_scale",
        "experiment.epsilon_exponent",
        "experiment.c0",
        "experiment.moment_order",
        "experiment.bandwidth_alpha",
        "experiment.bandwidth_scale",
        "experiment.order",
    ];
    let used: &[&str] = match name {
        "global" => &[],
        "local" => &[
            "experiment.x0",
            "experiment.epsilon_scale",
            "experiment.epsilon_exponent",
        ],
        "pointwise" => &["experiment.x0"],
        "moment" => &["experiment.moment_order"],
        "localization" => &["experiment.c0"],
        "smoothing" => &[
            "experiment.bandwidth_alpha",
            "experiment.bandwidth_scale",
            "experiment.order",
        ],
        other => {
            return Err(CliError::Usage(format!(
                "experiment.statistic: unknown statistic `{other}`"
            )))
        }
    };
    let unused: Vec<&str> = all.into_iter().filter(|k| !used.contains(k)).collect();
    e.forbid(&unused, &format!("statistic {name}"))?;
    let x0 = || -> Result<f64, CliError> {
        e.parsed("experiment.x0")?
            .ok_or_else(|| CliError::Usage("missing required key `experiment.x0`".into()))
    };
    let stat = match name {
        "global" => Statistic::Global,
        "local" => {
            let d = EpsilonRule::default();
            Statistic::Local {
                x0: x0()?,
                epsilon: EpsilonRule {
                    scale: e.or("experiment.epsilon_scale", d.scale)?,
                    exponent: e.or("experiment.epsilon_exponent", d.exponent)?,
                },
            }
        }
        "pointwise" => Statistic::Pointwise { x0: x0()? },
        "moment" => Statistic::Moment {
            order: e.or("experiment.moment_order", 2.0)?,
        },
        "localization" => Statistic::Localization {
            c0: e.or("experiment.c0", 1.0)?,
        },
        _ => {
            let d = BandwidthRule::default();
            let bandwidth = BandwidthRule::new(
                e.or("experiment.bandwidth_alpha", d.alpha())?,
                e.or("experiment.bandwidth_scale", d.scale())?,
            )
            .map_err(|err| CliError::Usage(format!("bandwidth rule: {err}")))?;
            let order = Order::from_index(e.or("experiment.order", 0u32)?)
                .map_err(|err| CliError::Usage(format!("experiment.order: {err}")))?;
            Statistic::Smoothing { bandwidth, order }
        }
    };
    Ok(stat)
}

impl RunConfig {
    /// Parses and validates `text`; `seed` overrides `experiment.seed`.
    pub fn parse(text: &str, seed: Option<u64>) -> Result<Self, CliError> {
        let e = Entries::parse(text)?;
        let model = model(&e)?;
        let statistic = statistic(&e)?;
        let n_grid = parse_grid(e.required("experiment.n_grid")?)?;
        let reps = parse_value("experiment.reps", e.required("experiment.reps")?)?;
        let seed = match seed {
            Some(s) => s,
            None => e.or("experiment.seed", 0u64)?,
        };
        let mut plan = ExperimentPlan::new(model, n_grid, reps, seed, statistic);
        plan.grid_cells = e.or("experiment.grid_cells", DEFAULT_GRID_CELLS)?;
        plan.validate()
            .map_err(|err| CliError::Usage(format!("invalid experiment: {err}")))?;
        Ok(Self { plan })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str =
        "model.variant = density\nexperiment.statistic = global\nexperiment.n_grid = 64\nexperiment.reps = 2\n";

    fn usage_message(text: &str) -> String {
        match RunConfig::parse(text, None) {
            Err(CliError::Usage(m)) => m,
            other => panic!("expected a usage error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config() {
        let c = RunConfig::parse(BASE, None).unwrap();
        assert_eq!(c.plan.n_grid, vec![64]);
        assert_eq!(c.plan.reps, 2);
        assert_eq!(c.plan.seed, 0);
        assert_eq!(c.plan.model.name(), "density");
        assert_eq!(RunConfig::parse(BASE, Some(9)).unwrap().plan.seed, 9);
    }

    #[test]
    fn comments_blank_lines_and_powers() {
        let text = "# header\n\nmodel.variant = surrogate  # bridge\nmodel.driver = motion\n\
                    experiment.statistic = local\nexperiment.x0 = 0.5\n\
                    experiment.n_grid = 2^6, 2^7 ,300\nexperiment.reps=1\n";
        let c = RunConfig::parse(text, None).unwrap();
        assert_eq!(c.plan.n_grid, vec![64, 128, 300]);
        assert!(matches!(c.plan.statistic, Statistic::Local { x0, .. } if x0 == 0.5));
        assert!(matches!(
            c.plan.model,
            ModelSpec::Surrogate {
                driver: DriverKind::Motion,
                ..
            }
        ));
    }

    #[test]
    fn unknown_key_is_named() {
        let m = usage_message(&format!("{BASE}experiment.rep = 3\n"));
        assert!(m.contains("experiment.rep"), "{m}");
    }

    #[test]
    fn missing_and_duplicate_keys() {
        assert!(usage_message("model.variant = density\n").contains("experiment.statistic"));
        assert!(usage_message(&format!("{BASE}experiment.reps = 3\n")).contains("duplicate"));
        assert!(usage_message(&format!("{BASE}no equals sign\n")).contains("line 5"));
    }

    #[test]
    fn irrelevant_keys_are_rejected() {
        let m = usage_message(&format!("{BASE}experiment.x0 = 0.5\n"));
        assert!(m.contains("experiment.x0"), "{m}");
        let m = usage_message(&format!("{BASE}model.censoring_rate = 2\n"));
        assert!(m.contains("model.censoring_rate"), "{m}");
    }

    #[test]
    fn invalid_plans_are_usage_errors() {
        usage_message(&BASE.replace("n_grid = 64", "n_grid = 128, 64"));
        usage_message(&BASE.replace("reps = 2", "reps = 0"));
        usage_message(&BASE.replace("reps = 2", "reps = two"));
        usage_message(&BASE.replace("density", "wicksell"));
        usage_message(&format!("{BASE}model.slope = 1\n"));
    }

    #[test]
    fn smoothing_statistic() {
        let text = BASE.replace("global", "smoothing") + "experiment.order = 1\n";
        let c = RunConfig::parse(&text, None).unwrap();
        assert!(matches!(
            c.plan.statistic,
            Statistic::Smoothing {
                order: Order::Derivative,
                ..
            }
        ));
        usage_message(&(BASE.replace("global", "smoothing") + "experiment.order = 2\n"));
    }
}
