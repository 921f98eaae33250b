//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monoshape::hull::{turn, upper_concave_majorant, Orientation, PlanePoint, PolylineEnvelope};
use monoshape::monotone::{
    bandwidth_holder, grenander_decompose, pava_decreasing, BandwidthRule, Biweight, InteriorEstimator, Order,
    SmoothedGrenander,
};
use monoshape::naive::uniform_grid;
use monoshape::ratelab::{
    fit_log_rate, localization_probability, median, nested_gaps, run_experiment, sub_seed, EpsilonRule, ExperimentPlan,
    ModelSpec, Regressor, ResultTable, Statistic,
};

const SEED: u64 = 0x5eed_2024;

fn rate_grid() -> Vec<usize> {
    (10..=17).map(|k| 1usize << k).collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn chord_oracle(points: &[PlanePoint]) -> Vec<PlanePoint> {
    let k = points.len();
    (0..k)
        .filter(|&i| {
            if i == 0 || i + 1 == k {
                return true;
            }
            !(0..i).any(|j| (i + 1..k).any(|l| turn(points[j], points[i], points[l]) >= 0.0))
        })
        .map(|i| points[i])
        .collect()
}

fn random_points(rng: &mut ChaCha8Rng, size: usize) -> Vec<PlanePoint> {
    let mut xs: Vec<f64> = (0..size).map(|_| rng.random::<f64>()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.into_iter()
        .map(|x| PlanePoint::new(x, rng.random::<f64>()))
        .collect()
}

fn c1_hull_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let size = rng.random_range(1..=64);
        let points = random_points(&mut rng, size);
        let env = upper_concave_majorant(&points).unwrap();
        let oracle = PolylineEnvelope::new(chord_oracle(&points), Orientation::Concave).unwrap();
        let same_values = points
            .iter()
            .all(|p| env.evaluate(p.x).unwrap() == oracle.evaluate(p.x).unwrap());
        if env.vertices() != oracle.vertices() || !same_values {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        mismatches == 0 && secs < 60.0,
        format!("{mismatches} mismatches in 1000 sets, {secs:.1}s"),
    )
}

fn c2_pava_hull() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let len = rng.random_range(1..=100);
        let values: Vec<f64> = (0..len).map(|_| rng.random_range(-2.0..2.0)).collect();
        let weights: Vec<f64> = (0..len).map(|_| rng.random_range(0.1..3.0)).collect();
        let fit = pava_decreasing(&values, &weights).unwrap();
        let mut csd = vec![PlanePoint::new(0.0, 0.0)];
        let (mut w, mut s) = (0.0, 0.0);
        for (v, wt) in values.iter().zip(&weights) {
            w += wt;
            s += wt * v;
            csd.push(PlanePoint::new(w, s));
        }
        let env = upper_concave_majorant(&csd).unwrap();
        for (k, f) in fit.iter().enumerate() {
            worst = worst.max((env.left_slope(csd[k + 1].x).unwrap() - f).abs());
        }
    }
    outcome(worst <= 1e-10, format!("max |pava - slope| = {worst:.2e}"))
}

fn global_plan(model: ModelSpec) -> ExperimentPlan {
    ExperimentPlan::new(model, rate_grid(), 200, SEED, Statistic::Global)
}

fn rate_check(table: &ResultTable, lo: f64, hi: f64, min_r2: Option<f64>, secs: f64) -> Outcome {
    let fit = fit_log_rate(&table.rows, Regressor::LogNOverN).unwrap();
    let r2_ok = min_r2.is_none_or(|m| fit.r_squared >= m);
    outcome(
        fit.slope >= lo && fit.slope <= hi && r2_ok,
        format!(
            "slope {:.4} ± {:.4} (band [{lo}, {hi}]), R² {:.4}, {secs:.1}s",
            fit.slope, fit.slope_std_err, fit.r_squared
        ),
    )
}

fn timed_run(plan: &ExperimentPlan) -> (ResultTable, f64) {
    let start = Instant::now();
    let t = run_experiment(plan).unwrap();
    (t, start.elapsed().as_secs_f64())
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

fn c6_pointwise() -> Outcome {
    let plan = ExperimentPlan::new(
        ModelSpec::default_density(),
        vec![1 << 12, 1 << 17],
        200,
        SEED,
        Statistic::Pointwise { x0: 0.5 },
    );
    let (table, secs) = timed_run(&plan);
    let scaled: Vec<f64> = plan
        .n_grid
        .iter()
        .map(|&n| median(&table.values_at(n)) * (n as f64).powf(2.0 / 3.0))
        .collect();
    let ratio = spread(&scaled);
    outcome(
        ratio <= 2.0,
        format!(
            "scaled medians {:.4} / {:.4}, ratio {ratio:.3}, {secs:.1}s",
            scaled[0], scaled[1]
        ),
    )
}

fn c7_local() -> Outcome {
    let start = Instant::now();
    let epsilon = EpsilonRule::default();
    let plan = ExperimentPlan::new(
        ModelSpec::default_density(),
        rate_grid(),
        200,
        SEED,
        Statistic::Local { x0: 0.5, epsilon },
    );
    let mut violations = 0;
    let mut scaled = Vec::new();
    for &n in &plan.n_grid {
        let gaps: Vec<_> = (0..plan.reps).map(|r| nested_gaps(&plan, n, r).unwrap()).collect();
        violations += gaps
            .iter()
            .filter(|g| !(g.pointwise <= g.local && g.local <= g.global))
            .count();
        let locals: Vec<f64> = gaps.iter().map(|g| g.local).collect();
        let nf = n as f64;
        scaled.push(median(&locals) * nf.sqrt() / epsilon.at(n).sqrt());
    }
    let ratio = spread(&scaled);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        violations == 0 && ratio <= 3.0,
        format!("{violations} nesting violations, scaled local spread {ratio:.3}, {secs:.1}s"),
    )
}

fn c8_localization() -> Outcome {
    let start = Instant::now();
    let mut estimates = Vec::new();
    for c0 in [1.0, 5.0, 50.0] {
        let plan = ExperimentPlan::new(
            ModelSpec::default_density(),
            vec![10_000],
            500,
            SEED,
            Statistic::Localization { c0 },
        );
        estimates.push(localization_probability(&plan, 10_000).unwrap());
    }
    let monotone = estimates.windows(2).all(|w| {
        let slack = 2.0 * (w[0].std_err.powi(2) + w[1].std_err.powi(2)).sqrt();
        w[1].probability <= w[0].probability + slack
    });
    let last = estimates[2].probability;
    let secs = start.elapsed().as_secs_f64();
    outcome(
        monotone && last <= 0.05,
        format!(
            "p(c0=1,5,50) = {:.3}, {:.3}, {:.3}; {secs:.1}s",
            estimates[0].probability, estimates[1].probability, last
        ),
    )
}

fn c9_marshall(tables: &[&ResultTable]) -> Outcome {
    let mut total = 0;
    let mut violations = 0;
    let mut undominated = 0;
    for t in tables {
        for c in t.checks() {
            total += 1;
            if !c.marshall_holds() {
                violations += 1;
            }
            if c.domination_margin < 0.0 {
                undominated += 1;
            }
        }
    }
    outcome(
        violations == 0 && undominated == 0 && total > 0,
        format!("{violations} Marshall violations, {undominated} domination failures in {total} replications"),
    )
}

fn c10_monotone_smooth() -> Outcome {
    let model = ModelSpec::default_density();
    let n = 4096;
    let h = bandwidth_holder(&BandwidthRule::default(), n).unwrap();
    let grid = uniform_grid(0.0, 1.0, 2047);
    let mut violations = 0;
    for rep in 0..100 {
        let cum = model.sample(n, sub_seed(SEED, n, rep)).unwrap().cumulative().unwrap();
        let env = monoshape::hull::Graph::majorant(&cum);
        let mono = grenander_decompose(&env).unwrap();
        let est = SmoothedGrenander {
            mono: &mono,
            kernel: &Biweight,
            h,
        };
        let values: Vec<f64> = grid.iter().map(|&t| est.corrected(t, Order::Value).unwrap()).collect();
        violations += values.windows(2).filter(|w| w[1] > w[0]).count();
    }
    outcome(
        violations == 0,
        format!("{violations} increases over 100 × 2048 evaluations"),
    )
}

fn c11_discrepancy() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for order in [Order::Value, Order::Derivative] {
        let plan = ExperimentPlan::new(
            ModelSpec::default_density(),
            vec![1 << 10, 1 << 12, 1 << 14],
            100,
            SEED,
            Statistic::Smoothing {
                bandwidth: BandwidthRule::default(),
                order,
            },
        );
        let table = run_experiment(&plan).unwrap();
        let scaled: Vec<f64> = plan
            .n_grid
            .iter()
            .map(|&n| {
                let nf = n as f64;
                let h = bandwidth_holder(&BandwidthRule::default(), n).unwrap();
                median(&table.values_at(n)) * h.powi(1 + order.index() as i32) * nf.powf(2.0 / 3.0)
                    / nf.ln().powf(2.0 / 3.0)
            })
            .collect();
        let ratio = spread(&scaled);
        pass &= ratio <= 3.0;
        details.push(format!("l={} spread {ratio:.3}", order.index()));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(pass, format!("{}, {secs:.1}s", details.join(", ")))
}

fn c12_moments() -> Outcome {
    let plan = ExperimentPlan::new(
        ModelSpec::default_surrogate(),
        rate_grid(),
        200,
        SEED,
        Statistic::Moment { order: 2.0 },
    );
    let (table, secs) = timed_run(&plan);
    rate_check(&table, 1.10, 1.60, None, secs)
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut report = |id: &'static str, o: Outcome| {
        println!("[{}] {id}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((id, o));
    };

    report("1 hull oracle equivalence", c1_hull_oracle());
    report("2 PAVA/hull equivalence", c2_pava_hull());

    let (density, s) = timed_run(&global_plan(ModelSpec::default_density()));
    let mut c3 = rate_check(&density, 0.55, 0.80, Some(0.95), s);
    c3.pass &= s <= 600.0;
    report("3 global rate, density", c3);
    let (regression, s) = timed_run(&global_plan(ModelSpec::default_regression()));
    let reg = rate_check(&regression, 0.55, 0.80, None, s);
    let (censoring, s) = timed_run(&global_plan(ModelSpec::default_censoring()));
    let cens = rate_check(&censoring, 0.55, 0.80, None, s);
    report(
        "4 global rate, regression and censoring",
        outcome(
            reg.pass && cens.pass,
            format!("regression: {}; censoring: {}", reg.detail, cens.detail),
        ),
    );
    let (primitive, s) = timed_run(&global_plan(ModelSpec::default_primitive()));
    report(
        "5 global rate, integrated process",
        rate_check(&primitive, 0.85, 1.15, None, s),
    );
    report("6 pointwise rate", c6_pointwise());
    report("7 local vs global nesting and scaling", c7_local());
    report("8 localization", c8_localization());
    report(
        "9 Marshall property",
        c9_marshall(&[&density, &regression, &censoring, &primitive]),
    );
    report("10 smoothed estimator monotonicity", c10_monotone_smooth());
    report("11 first-order equivalence scaling", c11_discrepancy());
    report("12 moment scaling", c12_moments());

    let failed: Vec<_> = results.iter().filter(|(_, o)| !o.pass).map(|(id, _)| *id).collect();
    println!(
        "acceptance: {} passed, {} failed",
        results.len() - failed.len(),
        failed.len()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
