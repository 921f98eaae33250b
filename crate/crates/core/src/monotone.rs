//! Grenander-type slope estimators, PAVA, kernel estimators and the smoothed
//! Grenander estimator with local linear boundary correction.

use std::fmt;
use std::sync::Arc;

use crate::error::{check_domain, input, Error, Result};
use crate::hull::{CadlagStep, Orientation, PolylineEnvelope};

/// Non-increasing step function on `[lower, upper]` stored as its jump
/// decomposition: value `tail + Σ_{j>=i} p_j` on `(τ_{i-1}, τ_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneStepFn {
    lower: f64,
    upper: f64,
    breakpoints: Vec<f64>,
    jumps: Vec<f64>,
    // levels[i] is the value on (breakpoints[i-1], breakpoints[i]]; the last is the tail.
    levels: Vec<f64>,
}

impl MonotoneStepFn {
    pub fn new(lower: f64, upper: f64, breakpoints: Vec<f64>, jumps: Vec<f64>, tail: f64) -> Result<Self> {
        if !(lower < upper) {
            return input(format!("invalid domain [{lower}, {upper}]"));
        }
        if breakpoints.len() != jumps.len() {
            return input("breakpoints and jump sizes differ in length");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) || breakpoints.iter().any(|&t| !(t > lower && t <= upper)) {
            return input("breakpoints must increase strictly within (lower, upper]");
        }
        if jumps.iter().any(|&p| !(p >= 0.0 && p.is_finite())) || !tail.is_finite() {
            return input("jump sizes must be finite and non-negative");
        }
        let mut levels = vec![tail; jumps.len() + 1];
        for j in (0..jumps.len()).rev() {
            levels[j] = levels[j + 1] + jumps[j];
        }
        Ok(Self {
            lower,
            upper,
            breakpoints,
            jumps,
            levels,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn jump_sizes(&self) -> &[f64] {
        &self.jumps
    }

    pub fn tail_value(&self) -> f64 {
        self.levels[self.levels.len() - 1]
    }

    /// Value at `t`, left-continuous at breakpoints; at `lower` it is the
    /// right limit.
    pub fn value_at(&self, t: f64) -> f64 {
        self.levels[self.breakpoints.partition_point(|&b| b < t)]
    }
}

/// Jump decomposition of the left-hand slope of a concave envelope.
///
/// Breakpoints are the interior vertices; the levels are the segment slopes
/// themselves, so pointwise values reproduce [`PolylineEnvelope::left_slope`]
/// exactly.
pub fn grenander_decompose(env: &PolylineEnvelope) -> Result<MonotoneStepFn> {
    if env.orientation() != Orientation::Concave {
        return input("the slope estimator needs a concave envelope");
    }
    let v = env.vertices();
    if v.len() < 2 {
        return input("the envelope must span an interval");
    }
    let levels = env.slopes();
    let breakpoints: Vec<f64> = v[1..v.len() - 1].iter().map(|p| p.x).collect();
    let jumps: Vec<f64> = levels.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect();
    Ok(MonotoneStepFn {
        lower: env.lower(),
        upper: env.upper(),
        breakpoints,
        jumps,
        levels,
    })
}

/// Weighted least-squares projection onto non-increasing sequences.
///
/// Adjacent blocks are pooled while they violate the order; blocks with
/// equal values are pooled as well.
pub fn pava_decreasing(values: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return input("PAVA needs at least one value");
    }
    if values.len() != weights.len() {
        return input("values and weights differ in length");
    }
    if weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
        return input("weights must be positive and finite");
    }
    if values.iter().any(|v| !v.is_finite()) {
        return input("values must be finite");
    }
    // (mean, weight, count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&y, &w) in values.iter().zip(weights) {
        blocks.push((y, w, 1));
        while blocks.len() >= 2 {
            let (m2, w2, c2) = blocks[blocks.len() - 1];
            let (m1, w1, c1) = blocks[blocks.len() - 2];
            if m1 > m2 {
                break;
            }
            blocks.pop();
            let total = w1 + w2;
            *blocks.last_mut().unwrap() = ((w1 * m1 + w2 * m2) / total, total, c1 + c2);
        }
    }
    Ok(blocks
        .into_iter()
        .flat_map(|(m, _, c)| std::iter::repeat_n(m, c))
        .collect())
}

/// A non-negative kernel supported on `[-1, 1]` with unit mass.
pub trait Kernel: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn density(&self, u: f64) -> f64;
    fn derivative(&self, u: f64) -> f64;
    /// `S_K(u) = ∫_u^∞ K`.
    fn survival(&self, u: f64) -> f64;
}

/// `K(u) = 15/16 (1 - u²)²`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Biweight;

impl Kernel for Biweight {
    fn name(&self) -> &str {
        "biweight"
    }

    fn density(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - u * u;
        0.9375 * s * s
    }

    fn derivative(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            return 0.0;
        }
        -3.75 * u * (1.0 - u * u)
    }

    fn survival(&self, u: f64) -> f64 {
        if u <= -1.0 {
            return 1.0;
        }
        if u >= 1.0 {
            return 0.0;
        }
        let r = 1.0 - u;
        (r * r * r * (8.0 + u * (9.0 + 3.0 * u)) / 16.0).clamp(0.0, 1.0)
    }
}

/// `K(u) = 35/32 (1 - u²)³`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Triweight;

impl Kernel for Triweight {
    fn name(&self) -> &str {
        "triweight"
    }

    fn density(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - u * u;
        1.093_75 * s * s * s
    }

    fn derivative(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - u * u;
        -6.5625 * u * s * s
    }

    fn survival(&self, u: f64) -> f64 {
        if u <= -1.0 {
            return 1.0;
        }
        if u >= 1.0 {
            return 0.0;
        }
        let r = 1.0 - u;
        let r4 = r * r * r * r;
        (r4 * (16.0 + u * (29.0 + u * (20.0 + 5.0 * u))) / 32.0).clamp(0.0, 1.0)
    }
}

/// `K(u) = 3/4 (1 - u²)`. Its derivative jumps at ±1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Epanechnikov;

impl Kernel for Epanechnikov {
    fn name(&self) -> &str {
        "epanechnikov"
    }

    fn density(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            0.0
        } else {
            0.75 * (1.0 - u * u)
        }
    }

    fn derivative(&self, u: f64) -> f64 {
        if u.abs() >= 1.0 {
            0.0
        } else {
            -1.5 * u
        }
    }

    fn survival(&self, u: f64) -> f64 {
        if u <= -1.0 {
            return 1.0;
        }
        if u >= 1.0 {
            return 0.0;
        }
        let r = 1.0 - u;
        (r * r * (2.0 + u) / 4.0).clamp(0.0, 1.0)
    }
}

type KernelFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied kernel; the survival function must be given in closed form.
#[derive(Clone)]
pub struct CustomKernel {
    name: String,
    density: KernelFn,
    derivative: KernelFn,
    survival: KernelFn,
}

impl fmt::Debug for CustomKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomKernel").field("name", &self.name).finish()
    }
}

impl CustomKernel {
    /// Checks support, sign, unit mass, zero first moment and the survival
    /// function on a fine grid before accepting the kernel.
    pub fn new(
        name: impl Into<String>,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
        survival: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let k = Self {
            name: name.into(),
            density: Arc::new(density),
            derivative: Arc::new(derivative),
            survival: Arc::new(survival),
        };
        validate_kernel(&k)?;
        Ok(k)
    }
}

impl Kernel for CustomKernel {
    fn name(&self) -> &str {
        &self.name
    }

    fn density(&self, u: f64) -> f64 {
        if u.abs() > 1.0 {
            0.0
        } else {
            (self.density)(u)
        }
    }

    fn derivative(&self, u: f64) -> f64 {
        if u.abs() > 1.0 {
            0.0
        } else {
            (self.derivative)(u)
        }
    }

    fn survival(&self, u: f64) -> f64 {
        if u <= -1.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            (self.survival)(u)
        }
    }
}

fn validate_kernel(k: &dyn Kernel) -> Result<()> {
    const STEPS: usize = 4000;
    let bad = |what: &str| Err(Error::Input(format!("kernel {}: {what}", k.name())));
    if (k.survival(-1.0) - 1.0).abs() > 1e-12 || k.survival(1.0).abs() > 1e-12 {
        return bad("survival function must run from 1 at -1 to 0 at 1");
    }
    let mut mass = 0.0;
    let mut first = 0.0;
    let mut prev_s = 1.0;
    let width = 2.0 / STEPS as f64;
    for i in 0..=STEPS {
        let u = -1.0 + i as f64 * width;
        let d = k.density(u);
        if d < 0.0 || !d.is_finite() {
            return bad("density must be finite and non-negative");
        }
        let s = k.survival(u);
        if s > prev_s + 1e-12 {
            return bad("survival function must be non-increasing");
        }
        prev_s = s;
        // Simpson weights
        let w = if i == 0 || i == STEPS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        mass += w * d;
        first += w * u * d;
    }
    mass *= width / 3.0;
    first *= width / 3.0;
    if (mass - 1.0).abs() > 1e-6 {
        return bad("density must integrate to one");
    }
    if first.abs() > 1e-6 {
        return bad("density must have zero first moment");
    }
    Ok(())
}

/// `h = scale * n^{-1/(2α+1)}` for a Hölder exponent `α ∈ (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthRule {
    alpha: f64,
    scale: f64,
}

impl BandwidthRule {
    pub fn new(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return input(format!("Hölder exponent {alpha} outside (1, 2]"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return input(format!("bandwidth scale {scale} must be positive"));
        }
        Ok(Self { alpha, scale })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl Default for BandwidthRule {
    fn default() -> Self {
        Self { alpha: 2.0, scale: 1.0 }
    }
}

pub fn bandwidth_holder(rule: &BandwidthRule, n: usize) -> Result<f64> {
    if n < 2 {
        return input("bandwidth needs n >= 2");
    }
    Ok(rule.scale * (n as f64).powf(-1.0 / (2.0 * rule.alpha + 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Value,
    Derivative,
}

impl Order {
    pub fn from_index(l: u32) -> Result<Self> {
        match l {
            0 => Ok(Order::Value),
            1 => Ok(Order::Derivative),
            _ => input(format!("derivative order {l} not supported")),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Order::Value => 0,
            Order::Derivative => 1,
        }
    }
}

fn check_interior(lower: f64, upper: f64, h: f64, t: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return input(format!("bandwidth {h} must be positive"));
    }
    if !(2.0 * h <= upper - lower) {
        return input(format!("bandwidth {h} too wide for [{lower}, {upper}]"));
    }
    check_domain(t, lower + h, upper - h)
}

/// Smoothed Grenander estimator at an interior point, from its closed form
/// `Σ p_j S_K((t - τ_j)/h) + tail`, or its derivative
/// `-(1/h) Σ p_j K((t - τ_j)/h)`.
///
/// The terms are summed in breakpoint order, so the value is non-increasing
/// in `t` in floating point whenever `S_K` is.
pub fn smoothed_grenander_eval(
    mono: &MonotoneStepFn,
    kernel: &dyn Kernel,
    h: f64,
    t: f64,
    order: Order,
) -> Result<f64> {
    check_interior(mono.lower, mono.upper, h, t)?;
    let terms = mono.breakpoints.iter().zip(&mono.jumps);
    Ok(match order {
        Order::Value => terms.fold(0.0, |acc, (&tau, &p)| acc + p * kernel.survival((t - tau) / h)) + mono.tail_value(),
        Order::Derivative => -terms.fold(0.0, |acc, (&tau, &p)| acc + p * kernel.density((t - tau) / h)) / h,
    })
}

/// Ordinary kernel estimator `h^{-(1+l)} Σ w_i K^{(l)}((t - x_i)/h)` over the
/// atoms of `step`, at an interior point. A non-zero base value counts as an
/// atom at the lower endpoint.
pub fn kernel_estimator_eval(step: &CadlagStep, kernel: &dyn Kernel, h: f64, t: f64, order: Order) -> Result<f64> {
    check_interior(step.lower(), step.upper(), h, t)?;
    let xs = step.jump_x();
    let start = xs.partition_point(|&x| x <= t - h);
    let end = xs.partition_point(|&x| x < t + h);
    let k = |u: f64| match order {
        Order::Value => kernel.density(u),
        Order::Derivative => kernel.derivative(u),
    };
    let mut acc = 0.0;
    if step.base_value() != 0.0 {
        acc += step.base_value() * k((t - step.lower()) / h);
    }
    let to = step.jump_to();
    for i in start..end {
        let before = if i == 0 { step.base_value() } else { to[i - 1] };
        acc += (to[i] - before) * k((t - xs[i]) / h);
    }
    Ok(match order {
        Order::Value => acc / h,
        Order::Derivative => acc / (h * h),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    Lower(f64),
    Upper(f64),
}

/// Local linear extension of an interior estimate into a boundary strip.
///
/// `interior_value` and `interior_deriv` are the estimate and its derivative
/// at `a + h` (resp. `b - h`).
pub fn boundary_extend(interior_value: f64, interior_deriv: f64, edge: Edge, h: f64, t: f64) -> Result<f64> {
    if !(h > 0.0) {
        return input(format!("bandwidth {h} must be positive"));
    }
    let seam = match edge {
        Edge::Lower(a) => {
            check_domain(t, a, a + h)?;
            a + h
        }
        Edge::Upper(b) => {
            check_domain(t, b - h, b)?;
            b - h
        }
    };
    Ok(interior_value + interior_deriv * (t - seam))
}

/// An estimator defined on `[a + h, b - h]` that can be extended to `[a, b]`.
pub trait InteriorEstimator {
    fn domain(&self) -> (f64, f64);
    fn bandwidth(&self) -> f64;
    fn interior(&self, t: f64, order: Order) -> Result<f64>;

    /// Evaluation on the whole domain, linearly extended in the boundary
    /// strips. In a strip the derivative is the seam derivative.
    fn corrected(&self, t: f64, order: Order) -> Result<f64> {
        let (a, b) = self.domain();
        let h = self.bandwidth();
        check_domain(t, a, b)?;
        let edge = if t < a + h {
            Edge::Lower(a)
        } else if t > b - h {
            Edge::Upper(b)
        } else {
            return self.interior(t, order);
        };
        let seam = match edge {
            Edge::Lower(a) => a + h,
            Edge::Upper(b) => b - h,
        };
        let deriv = self.interior(seam, Order::Derivative)?;
        match order {
            Order::Derivative => Ok(deriv),
            Order::Value => boundary_extend(self.interior(seam, Order::Value)?, deriv, edge, h, t),
        }
    }
}

/// Smoothed Grenander estimator with boundary correction.
#[derive(Debug, Clone, Copy)]
pub struct SmoothedGrenander<'a> {
    pub mono: &'a MonotoneStepFn,
    pub kernel: &'a dyn Kernel,
    pub h: f64,
}

impl InteriorEstimator for SmoothedGrenander<'_> {
    fn domain(&self) -> (f64, f64) {
        (self.mono.lower, self.mono.upper)
    }

    fn bandwidth(&self) -> f64 {
        self.h
    }

    fn interior(&self, t: f64, order: Order) -> Result<f64> {
        smoothed_grenander_eval(self.mono, self.kernel, self.h, t, order)
    }
}

/// Ordinary kernel estimator with boundary correction.
#[derive(Debug, Clone, Copy)]
pub struct KernelEstimator<'a> {
    pub step: &'a CadlagStep,
    pub kernel: &'a dyn Kernel,
    pub h: f64,
}

impl InteriorEstimator for KernelEstimator<'_> {
    fn domain(&self) -> (f64, f64) {
        (self.step.lower(), self.step.upper())
    }

    fn bandwidth(&self) -> f64 {
        self.h
    }

    fn interior(&self, t: f64, order: Order) -> Result<f64> {
        kernel_estimator_eval(self.step, self.kernel, self.h, t, order)
    }
}

/// `max_t |f̂_ns^{(l)}(t) - f̃_n^{(l)}(t)|` over `grid`, both estimators
/// boundary-corrected.
pub fn discrepancy_stat(
    mono: &MonotoneStepFn,
    step: &CadlagStep,
    kernel: &dyn Kernel,
    h: f64,
    order: Order,
    grid: &[f64],
) -> Result<f64> {
    if grid.is_empty() {
        return input("empty evaluation grid");
    }
    let smooth = SmoothedGrenander { mono, kernel, h };
    let naive = KernelEstimator { step, kernel, h };
    let mut worst: f64 = 0.0;
    for &t in grid {
        let d = (smooth.corrected(t, order)? - naive.corrected(t, order)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}
