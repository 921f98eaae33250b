//! Cumulative estimators built directly from data, their integrated process,
//! and Gaussian surrogate paths.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{input, Error, Result};
use crate::hull::{CadlagStep, PlanePoint};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function `f` on `[lower, upper]` together with its primitive
/// `F(t) = ∫_lower^t f` and the second primitive `∫_lower^t F`.
#[derive(Clone)]
pub struct TrueCurve {
    lower: f64,
    upper: f64,
    density: RealFn,
    cumulative: RealFn,
    integrated: RealFn,
    label: String,
}

impl fmt::Debug for TrueCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrueCurve")
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("label", &self.label)
            .finish()
    }
}

impl TrueCurve {
    /// `f(x) = intercept + slope * x` with closed-form primitives.
    pub fn linear(lower: f64, upper: f64, intercept: f64, slope: f64) -> Result<Self> {
        check_interval(lower, upper)?;
        if !intercept.is_finite() || !slope.is_finite() {
            return Err(Error::Model("curve coefficients must be finite".into()));
        }
        let f = move |x: f64| intercept + slope * x;
        // F(t) = c (t - a) + s (t² - a²) / 2, written around a for accuracy.
        let big_f = move |t: f64| {
            let d = t - lower;
            d * (intercept + slope * (lower + 0.5 * d))
        };
        let big_h = move |t: f64| {
            let d = t - lower;
            d * d * (0.5 * (intercept + slope * lower) + slope * d / 6.0)
        };
        Ok(Self {
            lower,
            upper,
            density: Arc::new(f),
            cumulative: Arc::new(big_f),
            integrated: Arc::new(big_h),
            label: format!("{intercept}{slope:+}x"),
        })
    }

    /// A curve from `f` and its primitive `F` with `F(lower) = 0`. The second
    /// primitive is computed by composite Gauss–Legendre quadrature.
    pub fn new(
        lower: f64,
        upper: f64,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        cumulative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        check_interval(lower, upper)?;
        let start = cumulative(lower);
        if start.abs() > 1e-12 {
            return Err(Error::Model(format!("F(a) must vanish, got {start}")));
        }
        let cumulative: RealFn = Arc::new(cumulative);
        let inner = cumulative.clone();
        let integrated = move |t: f64| gauss_legendre(&*inner, lower, t, 64);
        Ok(Self {
            lower,
            upper,
            density: Arc::new(density),
            cumulative,
            integrated: Arc::new(integrated),
            label: "custom".into(),
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn f(&self, x: f64) -> f64 {
        (self.density)(x)
    }

    pub fn big_f(&self, t: f64) -> f64 {
        (self.cumulative)(t)
    }

    /// `H(t) = ∫_a^t (F(b) - F(x)) dx`, the target of the integrated process.
    pub fn big_h(&self, t: f64) -> f64 {
        (t - self.lower) * self.big_f(self.upper) - (self.integrated)(t)
    }

    /// Smallest `t` in `[lower, upper]` with `F(t) >= level`, by bisection to
    /// an absolute width of 1e-12. Requires `F` non-decreasing.
    pub fn invert_cumulative(&self, level: f64) -> f64 {
        let (mut lo, mut hi) = (self.lower, self.upper);
        if level <= self.big_f(lo) {
            return lo;
        }
        if level >= self.big_f(hi) {
            return hi;
        }
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.big_f(mid) < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }
}

fn check_interval(lower: f64, upper: f64) -> Result<()> {
    if lower.is_finite() && upper.is_finite() && lower < upper {
        Ok(())
    } else {
        Err(Error::Model(format!("invalid interval [{lower}, {upper}]")))
    }
}

fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_47,
        0.478_628_670_499_366_47,
        0.236_926_885_056_189_08,
        0.236_926_885_056_189_08,
    ];
    if a == b {
        return 0.0;
    }
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let mid = a + (i as f64 + 0.5) * width;
            let half = 0.5 * width;
            half * NODES
                .iter()
                .zip(WEIGHTS)
                .map(|(&z, w)| w * f(mid + half * z))
                .sum::<f64>()
        })
        .sum()
}

/// Responses observed at design points of a fixed-design regression model.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    pub lower: f64,
    pub upper: f64,
    pub design: Vec<f64>,
    pub responses: Vec<f64>,
}

/// Right-censored survival data `(min(T, C), 1{T <= C})` observed up to a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalData {
    pub times: Vec<f64>,
    pub uncensored: Vec<bool>,
    pub horizon: f64,
}

/// `F_n(t) = n⁻¹ Σ Y_i 1{t_i <= t}`.
pub fn regression_cusum(data: &RegressionData) -> Result<CadlagStep> {
    let n = data.design.len();
    if n == 0 {
        return input("regression data is empty");
    }
    if data.responses.len() != n {
        return input("design and responses differ in length");
    }
    if data.design.windows(2).any(|w| w[0] > w[1]) {
        return input("design points must be non-decreasing");
    }
    let scale = 1.0 / n as f64;
    let increments: Vec<_> = data
        .design
        .iter()
        .zip(&data.responses)
        .map(|(&t, &y)| (t, y * scale))
        .collect();
    CadlagStep::from_increments(data.lower, data.upper, &increments)
}

/// Empirical distribution function of samples in `[lower, upper]`.
pub fn empirical_cdf(samples: &[f64], lower: f64, upper: f64) -> Result<CadlagStep> {
    if samples.is_empty() {
        return input("no samples");
    }
    if let Some(x) = samples.iter().find(|&&x| !(x >= lower && x <= upper)) {
        return input(format!("sample {x} outside [{lower}, {upper}]"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut base = 0usize;
    let mut xs = Vec::new();
    let mut counts = Vec::new();
    let mut seen = 0usize;
    for (i, &x) in sorted.iter().enumerate() {
        seen = i + 1;
        if x == lower {
            base = seen;
            continue;
        }
        if xs.last() == Some(&x) {
            *counts.last_mut().unwrap() = seen;
        } else {
            xs.push(x);
            counts.push(seen);
        }
    }
    debug_assert_eq!(seen, n);
    let to = counts.into_iter().map(|c| c as f64 / n as f64).collect();
    CadlagStep::new(lower, upper, base as f64 / n as f64, xs, to)
}

/// Cumulative hazard estimate on `[0, horizon]`: at the k-th distinct
/// uncensored time the value is `Σ_{j<=k} 1/n_j` with `n_j` the number at
/// risk. Each distinct time contributes one unit regardless of ties.
pub fn nelson_aalen(data: &SurvivalData) -> Result<CadlagStep> {
    let n = data.times.len();
    if data.uncensored.len() != n {
        return input("times and indicators differ in length");
    }
    if !(data.horizon.is_finite() && data.horizon > 0.0) {
        return input(format!("horizon {} must be positive", data.horizon));
    }
    if data.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return input("survival times must be finite and non-negative");
    }
    let mut sorted = data.times.clone();
    sorted.sort_by(f64::total_cmp);
    let mut failures: Vec<f64> = data
        .times
        .iter()
        .zip(&data.uncensored)
        .filter(|&(&t, &d)| d && t <= data.horizon)
        .map(|(&t, _)| t)
        .collect();
    if failures.is_empty() {
        return Err(Error::Model("no uncensored failure within the horizon".into()));
    }
    failures.sort_by(f64::total_cmp);
    failures.dedup();
    let increments: Vec<_> = failures
        .iter()
        .map(|&t| {
            let at_risk = n - sorted.partition_point(|&x| x < t);
            (t, 1.0 / at_risk as f64)
        })
        .collect();
    CadlagStep::from_increments(0.0, data.horizon, &increments)
}

/// Vertices of `H_n(t) = ∫_a^t (F_n(b) - F_n(x)) dx`, which is linear
/// between consecutive jumps of `F_n`.
pub fn primitive_process(step: &CadlagStep) -> Vec<PlanePoint> {
    let terminal = step.terminal_value();
    let mut out = Vec::with_capacity(step.jump_x().len() + 2);
    let mut x = step.lower();
    let mut level = step.base_value();
    let mut acc = 0.0;
    out.push(PlanePoint::new(x, 0.0));
    for (&jx, &to) in step.jump_x().iter().zip(step.jump_to()) {
        acc += (jx - x) * (terminal - level);
        out.push(PlanePoint::new(jx, acc));
        x = jx;
        level = to;
    }
    if x < step.upper() {
        acc += (step.upper() - x) * (terminal - level);
        out.push(PlanePoint::new(step.upper(), acc));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriverKind {
    Motion,
    Bridge,
}

impl DriverKind {
    pub fn name(self) -> &'static str {
        match self {
            DriverKind::Motion => "motion",
            DriverKind::Bridge => "bridge",
        }
    }
}

/// A Gaussian process sampled on a grid of time-changed abscissae `L(t_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussDriver {
    pub kind: DriverKind,
    pub time_change: Vec<f64>,
    pub path: Vec<f64>,
}

impl GaussDriver {
    /// Simulates a driver on a non-decreasing grid of `L` values. The path
    /// starts at zero; a bridge is pinned at zero at both grid ends.
    pub fn simulate<R: Rng + ?Sized>(kind: DriverKind, time_change: Vec<f64>, rng: &mut R) -> Result<Self> {
        if time_change.is_empty() {
            return input("empty time-change grid");
        }
        if time_change.iter().any(|v| !v.is_finite()) || time_change.windows(2).any(|w| w[0] > w[1]) {
            return input("time-change grid must be finite and non-decreasing");
        }
        let mut path = Vec::with_capacity(time_change.len());
        let mut w = 0.0;
        path.push(0.0);
        for cell in time_change.windows(2) {
            let z: f64 = rng.sample(StandardNormal);
            w += (cell[1] - cell[0]).sqrt() * z;
            path.push(w);
        }
        if kind == DriverKind::Bridge {
            let start = time_change[0];
            let span = time_change[time_change.len() - 1] - start;
            let end = w;
            if span > 0.0 {
                for (p, &s) in path.iter_mut().zip(&time_change) {
                    *p -= (s - start) / span * end;
                }
            }
            if let Some(last) = path.last_mut() {
                *last = 0.0;
            }
        }
        Ok(Self {
            kind,
            time_change,
            path,
        })
    }

    pub fn zero(kind: DriverKind, time_change: Vec<f64>) -> Self {
        let path = vec![0.0; time_change.len()];
        Self {
            kind,
            time_change,
            path,
        }
    }
}

/// Graph points `(t, F(t) + n^{-1/2} B(L(t)))` of the surrogate process on
/// `grid`; the driver must have been sampled on `L` evaluated at `grid`.
pub fn gaussian_surrogate(curve: &TrueCurve, driver: &GaussDriver, n: usize, grid: &[f64]) -> Result<Vec<PlanePoint>> {
    if grid.len() != driver.path.len() || grid.len() != driver.time_change.len() {
        return input("driver and grid differ in length");
    }
    if n == 0 {
        return input("sample size must be positive");
    }
    if let Some(t) = grid.iter().find(|&&t| !(t >= curve.lower() && t <= curve.upper())) {
        return input(format!("grid abscissa {t} outside the curve domain"));
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(grid
        .iter()
        .zip(&driver.path)
        .map(|(&t, &b)| PlanePoint::new(t, curve.big_f(t) + scale * b))
        .collect())
}

/// Equally spaced grid of `cells + 1` abscissae covering `[lower, upper]`.
pub fn uniform_grid(lower: f64, upper: f64, cells: usize) -> Vec<f64> {
    let cells = cells.max(1);
    let width = upper - lower;
    (0..=cells)
        .map(|i| {
            if i == cells {
                upper
            } else {
                lower + width * (i as f64 / cells as f64)
            }
        })
        .collect()
}
