//! Data-generating models and their simulators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::hull::{CadlagStep, Graph, PlanePoint, PointPath, PolylineEnvelope, SupGap};
use crate::naive::{
    empirical_cdf, gaussian_surrogate, nelson_aalen, primitive_process, regression_cusum, uniform_grid, DriverKind,
    GaussDriver, RegressionData, SurvivalData, TrueCurve,
};

/// Distribution of the regression errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorLaw {
    Gaussian {
        sd: f64,
    },
    /// Uniform on `[-half_width, half_width]`.
    Uniform {
        half_width: f64,
    },
}

impl ErrorLaw {
    fn validate(&self) -> Result<()> {
        let scale = match *self {
            ErrorLaw::Gaussian { sd } => sd,
            ErrorLaw::Uniform { half_width } => half_width,
        };
        if scale > 0.0 && scale.is_finite() {
            Ok(())
        } else {
            Err(Error::Model(format!("error scale {scale} must be positive")))
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ErrorLaw::Gaussian { sd } => sd * rng.sample::<f64, _>(StandardNormal),
            ErrorLaw::Uniform { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
        }
    }

    /// Variance of one error.
    pub fn variance(&self) -> f64 {
        match *self {
            ErrorLaw::Gaussian { sd } => sd * sd,
            ErrorLaw::Uniform { half_width } => half_width * half_width / 3.0,
        }
    }
}

/// Time change `L` of the surrogate driver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeChange {
    /// `L = F`, the empirical-process case.
    Cumulative,
    /// `L(t) = rate * (t - a)`.
    Linear { rate: f64 },
}

#[derive(Debug, Clone)]
pub enum ModelSpec {
    /// `Y_i = f(t_i) + ε_i` at `t_i = a + (b - a) i / n`.
    Regression { curve: TrueCurve, errors: ErrorLaw },
    /// i.i.d. draws from the density `f` on `[a, b]`.
    Density { curve: TrueCurve },
    /// Failure times with hazard `f` on `[0, b]`, censored by an independent
    /// exponential variable.
    Censoring { curve: TrueCurve, censoring_rate: f64 },
    /// `F + n^{-1/2} B ∘ L` sampled on `cells + 1` equispaced abscissae
    /// (`cells = n` when unset).
    Surrogate {
        curve: TrueCurve,
        driver: DriverKind,
        time_change: TimeChange,
        cells: Option<usize>,
    },
    /// The integrated process of the regression cusum.
    Primitive { curve: TrueCurve, errors: ErrorLaw },
}

/// Observations drawn from a [`ModelSpec`].
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Regression(RegressionData),
    Density { samples: Vec<f64>, lower: f64, upper: f64 },
    Censoring(SurvivalData),
    Surrogate(Vec<PlanePoint>),
    Primitive(RegressionData),
}

/// The naive cumulative estimate whose majorant is studied.
#[derive(Debug, Clone, PartialEq)]
pub enum Cumulative {
    Step(CadlagStep),
    Path(PointPath),
}

impl Cumulative {
    pub fn as_step(&self) -> Option<&CadlagStep> {
        match self {
            Cumulative::Step(s) => Some(s),
            Cumulative::Path(_) => None,
        }
    }

    /// Abscissae where the function changes shape: jumps or path vertices.
    pub fn knots(&self) -> Vec<f64> {
        match self {
            Cumulative::Step(s) => s.jump_x().to_vec(),
            Cumulative::Path(p) => p.points().iter().map(|q| q.x).collect(),
        }
    }

    pub fn left_limit(&self, x: f64) -> f64 {
        match self {
            Cumulative::Step(s) => s.left_limit(x),
            Cumulative::Path(p) => p.value_at(x),
        }
    }
}

impl Graph for Cumulative {
    fn domain(&self) -> (f64, f64) {
        match self {
            Cumulative::Step(s) => s.domain(),
            Cumulative::Path(p) => p.domain(),
        }
    }

    fn value_at(&self, x: f64) -> f64 {
        match self {
            Cumulative::Step(s) => s.value_at(x),
            Cumulative::Path(p) => p.value_at(x),
        }
    }

    fn restricted_points(&self, lo: f64, hi: f64) -> Vec<PlanePoint> {
        match self {
            Cumulative::Step(s) => s.restricted_points(lo, hi),
            Cumulative::Path(p) => p.restricted_points(lo, hi),
        }
    }

    fn gap_candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64, bool)> {
        match self {
            Cumulative::Step(s) => s.gap_candidates(lo, hi),
            Cumulative::Path(p) => p.gap_candidates(lo, hi),
        }
    }

    fn sup_gap_on(&self, env: &PolylineEnvelope, lo: f64, hi: f64) -> Result<SupGap> {
        match self {
            Cumulative::Step(s) => s.sup_gap_on(env, lo, hi),
            Cumulative::Path(p) => p.sup_gap_on(env, lo, hi),
        }
    }
}

const SHAPE_GRID: usize = 512;

fn shape_grid(curve: &TrueCurve) -> Vec<f64> {
    uniform_grid(curve.lower(), curve.upper(), SHAPE_GRID)
}

/// Decreasing with derivative bounded away from zero, checked on a grid.
fn check_decreasing(curve: &TrueCurve) -> Result<()> {
    let grid = shape_grid(curve);
    for w in grid.windows(2) {
        let (u, v) = (curve.f(w[0]), curve.f(w[1]));
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::Model("f must be finite".into()));
        }
        if !(v < u) {
            return Err(Error::Model(format!(
                "f must be strictly decreasing; f({}) = {u} <= f({}) = {v}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn check_positive(curve: &TrueCurve) -> Result<()> {
    let min = shape_grid(curve)
        .iter()
        .map(|&t| curve.f(t))
        .fold(f64::INFINITY, f64::min);
    if min > 0.0 && min.is_finite() {
        Ok(())
    } else {
        Err(Error::Model(format!("f must be bounded away from zero (min {min})")))
    }
}

impl ModelSpec {
    /// Density `f(x) = 1.5 - x` on `[0, 1]`.
    pub fn default_density() -> Self {
        ModelSpec::Density {
            curve: TrueCurve::linear(0.0, 1.0, 1.5, -1.0).expect("valid curve"),
        }
    }

    /// `f(x) = 2 - x` on `[0, 1]` with standard Gaussian errors.
    pub fn default_regression() -> Self {
        ModelSpec::Regression {
            curve: TrueCurve::linear(0.0, 1.0, 2.0, -1.0).expect("valid curve"),
            errors: ErrorLaw::Gaussian { sd: 1.0 },
        }
    }

    /// Hazard `f(x) = 2 - x` on `[0, 0.9]` with unit-rate exponential censoring.
    pub fn default_censoring() -> Self {
        ModelSpec::Censoring {
            curve: TrueCurve::linear(0.0, 0.9, 2.0, -1.0).expect("valid curve"),
            censoring_rate: 1.0,
        }
    }

    /// The regression default, integrated.
    pub fn default_primitive() -> Self {
        ModelSpec::Primitive {
            curve: TrueCurve::linear(0.0, 1.0, 2.0, -1.0).expect("valid curve"),
            errors: ErrorLaw::Gaussian { sd: 1.0 },
        }
    }

    /// Brownian-bridge surrogate of the density default with `L = F`.
    pub fn default_surrogate() -> Self {
        ModelSpec::Surrogate {
            curve: TrueCurve::linear(0.0, 1.0, 1.5, -1.0).expect("valid curve"),
            driver: DriverKind::Bridge,
            time_change: TimeChange::Cumulative,
            cells: None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Regression { .. } => "regression",
            ModelSpec::Density { .. } => "density",
            ModelSpec::Censoring { .. } => "censoring",
            ModelSpec::Surrogate { .. } => "surrogate",
            ModelSpec::Primitive { .. } => "primitive",
        }
    }

    pub fn curve(&self) -> &TrueCurve {
        match self {
            ModelSpec::Regression { curve, .. }
            | ModelSpec::Density { curve }
            | ModelSpec::Censoring { curve, .. }
            | ModelSpec::Surrogate { curve, .. }
            | ModelSpec::Primitive { curve, .. } => curve,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.curve().lower(), self.curve().upper())
    }

    /// Tail regime of the approximating Gaussian process.
    pub fn tau(&self) -> f64 {
        match self {
            ModelSpec::Primitive { .. } => 2.0,
            _ => 1.0,
        }
    }

    /// Whether the naive estimate is a step function (rather than a path).
    pub fn is_step(&self) -> bool {
        matches!(
            self,
            ModelSpec::Regression { .. } | ModelSpec::Density { .. } | ModelSpec::Censoring { .. }
        )
    }

    /// The concave function the naive estimate targets: `F`, or `H` for the
    /// integrated process.
    pub fn target(&self, t: f64) -> f64 {
        match self {
            ModelSpec::Primitive { curve, .. } => curve.big_h(t),
            _ => self.curve().big_f(t),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::Regression { curve, errors } => {
                check_decreasing(curve)?;
                errors.validate()
            }
            ModelSpec::Density { curve } => {
                check_decreasing(curve)?;
                check_positive(curve)?;
                let mass = curve.big_f(curve.upper());
                if (mass - 1.0).abs() > 1e-9 {
                    return Err(Error::Model(format!("density integrates to {mass}, not 1")));
                }
                Ok(())
            }
            ModelSpec::Censoring { curve, censoring_rate } => {
                if curve.lower() != 0.0 {
                    return Err(Error::Model("the censoring model lives on [0, b]".into()));
                }
                check_decreasing(curve)?;
                check_positive(curve)?;
                if !(*censoring_rate > 0.0 && censoring_rate.is_finite()) {
                    return Err(Error::Model(format!(
                        "censoring rate {censoring_rate} must be positive"
                    )));
                }
                Ok(())
            }
            ModelSpec::Surrogate {
                curve,
                time_change,
                cells,
                ..
            } => {
                check_decreasing(curve)?;
                match time_change {
                    TimeChange::Cumulative => check_positive(curve)?,
                    TimeChange::Linear { rate } if !(*rate > 0.0 && rate.is_finite()) => {
                        return Err(Error::Model(format!("time-change rate {rate} must be positive")));
                    }
                    TimeChange::Linear { .. } => {}
                }
                if *cells == Some(0) {
                    return Err(Error::Model("surrogate grid needs at least one cell".into()));
                }
                Ok(())
            }
            ModelSpec::Primitive { curve, errors } => {
                check_positive(curve)?;
                errors.validate()
            }
        }
    }

    /// Time change evaluated at `t`.
    pub fn time_change_at(&self, t: f64) -> Option<f64> {
        match self {
            ModelSpec::Surrogate { curve, time_change, .. } => Some(match time_change {
                TimeChange::Cumulative => curve.big_f(t),
                TimeChange::Linear { rate } => rate * (t - curve.lower()),
            }),
            _ => None,
        }
    }

    /// Draws a dataset of size `n`; a pure function of `(self, n, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::Input("sample size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = self.domain();
        Ok(match self {
            ModelSpec::Regression { curve, errors } => {
                Dataset::Regression(regression_sample(curve, errors, n, &mut rng))
            }
            ModelSpec::Primitive { curve, errors } => Dataset::Primitive(regression_sample(curve, errors, n, &mut rng)),
            ModelSpec::Density { curve } => {
                let mass = curve.big_f(b);
                let samples = (0..n)
                    .map(|_| curve.invert_cumulative(rng.random::<f64>() * mass))
                    .collect();
                Dataset::Density {
                    samples,
                    lower: a,
                    upper: b,
                }
            }
            ModelSpec::Censoring { curve, censoring_rate } => {
                let cum_b = curve.big_f(b);
                let hazard_b = curve.f(b);
                let mut times = Vec::with_capacity(n);
                let mut uncensored = Vec::with_capacity(n);
                for _ in 0..n {
                    let e: f64 = rng.sample(Exp1);
                    // Beyond b the hazard is held at f(b).
                    let t = if e <= cum_b {
                        curve.invert_cumulative(e)
                    } else {
                        b + (e - cum_b) / hazard_b
                    };
                    let c: f64 = rng.sample::<f64, _>(Exp1) / censoring_rate;
                    times.push(t.min(c));
                    uncensored.push(t <= c);
                }
                Dataset::Censoring(SurvivalData {
                    times,
                    uncensored,
                    horizon: b,
                })
            }
            ModelSpec::Surrogate {
                curve, driver, cells, ..
            } => {
                let grid = uniform_grid(a, b, cells.unwrap_or(n));
                let l: Vec<f64> = grid
                    .iter()
                    .map(|&t| self.time_change_at(t).expect("surrogate"))
                    .collect();
                let path = GaussDriver::simulate(*driver, l, &mut rng)?;
                Dataset::Surrogate(gaussian_surrogate(curve, &path, n, &grid)?)
            }
        })
    }
}

fn regression_sample<R: Rng + ?Sized>(curve: &TrueCurve, errors: &ErrorLaw, n: usize, rng: &mut R) -> RegressionData {
    let (a, b) = (curve.lower(), curve.upper());
    let design: Vec<f64> = (1..=n)
        .map(|i| if i == n { b } else { a + (b - a) * (i as f64 / n as f64) })
        .collect();
    let responses = design.iter().map(|&t| curve.f(t) + errors.draw(rng)).collect();
    RegressionData {
        lower: a,
        upper: b,
        design,
        responses,
    }
}

impl Dataset {
    pub fn cumulative(&self) -> Result<Cumulative> {
        Ok(match self {
            Dataset::Regression(d) => Cumulative::Step(regression_cusum(d)?),
            Dataset::Density { samples, lower, upper } => Cumulative::Step(empirical_cdf(samples, *lower, *upper)?),
            Dataset::Censoring(d) => Cumulative::Step(nelson_aalen(d)?),
            Dataset::Surrogate(points) => Cumulative::Path(PointPath::new(points.clone())?),
            Dataset::Primitive(d) => Cumulative::Path(PointPath::new(primitive_process(&regression_cusum(d)?))?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        for spec in [
            ModelSpec::default_density(),
            ModelSpec::default_regression(),
            ModelSpec::default_censoring(),
            ModelSpec::default_surrogate(),
            ModelSpec::default_primitive(),
        ] {
            spec.validate().unwrap();
            assert_eq!(
                spec.sample(200, 17).unwrap(),
                spec.sample(200, 17).unwrap(),
                "{}",
                spec.name()
            );
            assert_ne!(spec.sample(200, 17).unwrap(), spec.sample(200, 18).unwrap());
        }
    }

    #[test]
    fn regression_design_is_uniform() {
        let Dataset::Regression(d) = ModelSpec::default_regression().sample(8, 1).unwrap() else {
            panic!("variant")
        };
        assert_eq!(d.design, vec![0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0]);
    }

    #[test]
    fn invalid_models_rejected() {
        let increasing = TrueCurve::linear(0.0, 1.0, 0.5, 1.0).unwrap();
        assert!(ModelSpec::Density {
            curve: increasing.clone()
        }
        .validate()
        .is_err());
        let unnormalized = TrueCurve::linear(0.0, 1.0, 3.0, -1.0).unwrap();
        assert!(ModelSpec::Density { curve: unnormalized }.validate().is_err());
        let bad_errors = ModelSpec::Regression {
            curve: TrueCurve::linear(0.0, 1.0, 2.0, -1.0).unwrap(),
            errors: ErrorLaw::Gaussian { sd: 0.0 },
        };
        assert!(bad_errors.validate().is_err());
        let shifted = ModelSpec::Censoring {
            curve: TrueCurve::linear(0.5, 1.0, 2.0, -1.0).unwrap(),
            censoring_rate: 1.0,
        };
        assert!(shifted.validate().is_err());
        // A5 only needs positivity: an increasing positive f is fine.
        let prim = ModelSpec::Primitive {
            curve: increasing,
            errors: ErrorLaw::Uniform { half_width: 1.0 },
        };
        prim.validate().unwrap();
        let vanishing = ModelSpec::Primitive {
            curve: TrueCurve::linear(0.0, 1.0, 1.0, -1.0).unwrap(),
            errors: ErrorLaw::Gaussian { sd: 1.0 },
        };
        assert!(vanishing.validate().is_err());
    }

    #[test]
    fn cumulative_kinds() {
        let d = ModelSpec::default_density()
            .sample(50, 2)
            .unwrap()
            .cumulative()
            .unwrap();
        assert!(d.as_step().is_some());
        assert_eq!(d.value_at(1.0), 1.0);
        let p = ModelSpec::default_primitive()
            .sample(50, 2)
            .unwrap()
            .cumulative()
            .unwrap();
        assert!(p.as_step().is_none());
        assert_eq!(p.value_at(0.0), 0.0);
        let s = ModelSpec::default_surrogate()
            .sample(50, 2)
            .unwrap()
            .cumulative()
            .unwrap();
        assert_eq!(s.knots().len(), 51);
    }
}
