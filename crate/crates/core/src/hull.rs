//! Least concave majorants and greatest convex minorants of discretely
//! represented functions.
//!
//! Two kinds of input graph are supported: right-continuous step functions
//! ([`CadlagStep`]) and continuous piecewise-linear paths ([`PointPath`]).
//! Both expose the points whose upper hull is the majorant of the whole
//! function, over the full domain or any sub-window of it ([`Graph`]).
//!
//! Hull construction is a monotone chain driven by an exact orientation
//! predicate, so vertex sets do not depend on floating-point cancellation in
//! the cross product.

use robust::{orient2d, Coord};

use crate::error::{check_domain, input, Error, Result};

/// A point of the graph of a function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn coord(self) -> Coord<f64> {
        Coord { x: self.x, y: self.y }
    }

    fn reflect(self) -> Self {
        Self::new(self.x, -self.y)
    }
}

/// Sign of the turn `a -> b -> c`; positive for counterclockwise.
///
/// Exact for all finite inputs.
pub fn turn(a: PlanePoint, b: PlanePoint, c: PlanePoint) -> f64 {
    orient2d(a.coord(), b.coord(), c.coord())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Concave,
    Convex,
}

/// A concave or convex piecewise-linear function stored as its vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct PolylineEnvelope {
    vertices: Vec<PlanePoint>,
    orientation: Orientation,
}

impl PolylineEnvelope {
    /// Builds an envelope from explicit vertices, checking ordering and shape.
    pub fn new(vertices: Vec<PlanePoint>, orientation: Orientation) -> Result<Self> {
        validate_points(&vertices)?;
        for w in vertices.windows(3) {
            let t = turn(w[0], w[1], w[2]);
            let bad = match orientation {
                Orientation::Concave => t > 0.0,
                Orientation::Convex => t < 0.0,
            };
            if bad {
                return input(format!("vertex at x={} breaks {:?} orientation", w[1].x, orientation));
            }
        }
        Ok(Self { vertices, orientation })
    }

    pub fn vertices(&self) -> &[PlanePoint] {
        &self.vertices
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn lower(&self) -> f64 {
        self.vertices[0].x
    }

    pub fn upper(&self) -> f64 {
        self.vertices[self.vertices.len() - 1].x
    }

    /// Segment slopes from left to right; empty for a single vertex.
    pub fn slopes(&self) -> Vec<f64> {
        self.vertices.windows(2).map(|w| slope(w[0], w[1])).collect()
    }

    /// Linear interpolation between the bracketing vertices; exact at vertices.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        check_domain(x, self.lower(), self.upper())?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        let v = &self.vertices;
        let k = v.partition_point(|p| p.x < x);
        if k == v.len() {
            return v[k - 1].y;
        }
        if v[k].x == x || k == 0 {
            return v[k].y;
        }
        let (p, q) = (v[k - 1], v[k]);
        p.y + (q.y - p.y) * ((x - p.x) / (q.x - p.x))
    }

    /// Slope of the segment immediately to the left of `x`.
    ///
    /// At the left endpoint this is the right limit, i.e. the first segment's
    /// slope. A single-vertex envelope is constant and has slope zero.
    pub fn left_slope(&self, x: f64) -> Result<f64> {
        check_domain(x, self.lower(), self.upper())?;
        let v = &self.vertices;
        if v.len() == 1 {
            return Ok(0.0);
        }
        let k = v.partition_point(|p| p.x < x).max(1);
        Ok(slope(v[k - 1], v[k]))
    }
}

fn slope(p: PlanePoint, q: PlanePoint) -> f64 {
    (q.y - p.y) / (q.x - p.x)
}

fn validate_points(points: &[PlanePoint]) -> Result<()> {
    if points.is_empty() {
        return input("at least one point is required");
    }
    for p in points {
        if !p.x.is_finite() || !p.y.is_finite() {
            return input(format!("non-finite point ({}, {})", p.x, p.y));
        }
    }
    if let Some(w) = points.windows(2).find(|w| w[0].x >= w[1].x) {
        return input(format!(
            "abscissae must be strictly increasing ({} then {})",
            w[0].x, w[1].x
        ));
    }
    Ok(())
}

fn upper_hull(points: &[PlanePoint]) -> Vec<PlanePoint> {
    let mut hull: Vec<PlanePoint> = Vec::with_capacity(points.len().min(64));
    for &p in points {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) >= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Least concave majorant of points with strictly increasing abscissae.
///
/// The vertices are a subsequence of the input; collinear interior points
/// are dropped so slopes strictly decrease.
pub fn upper_concave_majorant(points: &[PlanePoint]) -> Result<PolylineEnvelope> {
    validate_points(points)?;
    Ok(PolylineEnvelope {
        vertices: upper_hull(points),
        orientation: Orientation::Concave,
    })
}

/// Greatest convex minorant, computed as the reflected majorant of the
/// reflected points.
pub fn lower_convex_minorant(points: &[PlanePoint]) -> Result<PolylineEnvelope> {
    validate_points(points)?;
    let reflected: Vec<_> = points.iter().map(|p| p.reflect()).collect();
    Ok(PolylineEnvelope {
        vertices: upper_hull(&reflected).into_iter().map(PlanePoint::reflect).collect(),
        orientation: Orientation::Convex,
    })
}

/// Right-continuous step function on `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagStep {
    lower: f64,
    upper: f64,
    base: f64,
    jump_x: Vec<f64>,
    jump_to: Vec<f64>,
}

impl CadlagStep {
    pub fn new(lower: f64, upper: f64, base: f64, jump_x: Vec<f64>, jump_to: Vec<f64>) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return input(format!("invalid domain [{lower}, {upper}]"));
        }
        if jump_x.len() != jump_to.len() {
            return input("jump abscissae and values differ in length");
        }
        if !base.is_finite() || jump_to.iter().any(|v| !v.is_finite()) {
            return input("step values must be finite");
        }
        if jump_x.windows(2).any(|w| w[0] >= w[1]) {
            return input("jump abscissae must be strictly increasing");
        }
        if let (Some(&first), Some(&last)) = (jump_x.first(), jump_x.last()) {
            if !(first > lower && last <= upper) {
                return input(format!("jumps must lie in ({lower}, {upper}]"));
            }
        }
        Ok(Self {
            lower,
            upper,
            base,
            jump_x,
            jump_to,
        })
    }

    /// Constant function on `[lower, upper]`.
    pub fn constant(lower: f64, upper: f64, value: f64) -> Result<Self> {
        Self::new(lower, upper, value, Vec::new(), Vec::new())
    }

    /// Step function from (abscissa, increment) pairs sorted by abscissa.
    ///
    /// Coincident abscissae are merged, increments at or below `lower` fold
    /// into the base value and zero net increments are dropped.
    pub fn from_increments(lower: f64, upper: f64, increments: &[(f64, f64)]) -> Result<Self> {
        let mut base = 0.0;
        let mut jump_x: Vec<f64> = Vec::new();
        let mut jump_size: Vec<f64> = Vec::new();
        for &(x, dy) in increments {
            if !x.is_finite() || !dy.is_finite() {
                return input("increments must be finite");
            }
            if x > upper || x < lower {
                return input(format!("increment at {x} outside [{lower}, {upper}]"));
            }
            if x == lower {
                base += dy;
            } else if jump_x.last() == Some(&x) {
                *jump_size.last_mut().unwrap() += dy;
            } else if jump_x.last().is_some_and(|&last| last > x) {
                return input("increments must be sorted by abscissa");
            } else {
                jump_x.push(x);
                jump_size.push(dy);
            }
        }
        let mut xs = Vec::with_capacity(jump_x.len());
        let mut to = Vec::with_capacity(jump_x.len());
        let mut level = base;
        for (x, dy) in jump_x.into_iter().zip(jump_size) {
            if dy != 0.0 {
                level += dy;
                xs.push(x);
                to.push(level);
            }
        }
        Self::new(lower, upper, base, xs, to)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn base_value(&self) -> f64 {
        self.base
    }

    pub fn jump_x(&self) -> &[f64] {
        &self.jump_x
    }

    pub fn jump_to(&self) -> &[f64] {
        &self.jump_to
    }

    /// Jump locations and signed jump sizes.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.jump_x.iter().enumerate().map(move |(i, &x)| {
            let before = if i == 0 { self.base } else { self.jump_to[i - 1] };
            (x, self.jump_to[i] - before)
        })
    }

    /// Value at `t`; the base value left of the first jump.
    pub fn value_at(&self, t: f64) -> f64 {
        let k = self.jump_x.partition_point(|&x| x <= t);
        if k == 0 {
            self.base
        } else {
            self.jump_to[k - 1]
        }
    }

    /// Left limit at `t`.
    pub fn left_limit(&self, t: f64) -> f64 {
        let k = self.jump_x.partition_point(|&x| x < t);
        if k == 0 {
            self.base
        } else {
            self.jump_to[k - 1]
        }
    }

    /// Value at the right domain endpoint.
    pub fn terminal_value(&self) -> f64 {
        self.jump_to.last().copied().unwrap_or(self.base)
    }
}

/// Continuous piecewise-linear function through strictly ordered points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPath {
    points: Vec<PlanePoint>,
}

impl PointPath {
    pub fn new(points: Vec<PlanePoint>) -> Result<Self> {
        validate_points(&points)?;
        if points.len() < 2 {
            return input("a path needs at least two points");
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let v = &self.points;
        let k = v.partition_point(|p| p.x < x);
        if k == v.len() {
            return v[k - 1].y;
        }
        if v[k].x == x || k == 0 {
            return v[k].y;
        }
        let (p, q) = (v[k - 1], v[k]);
        p.y + (q.y - p.y) * ((x - p.x) / (q.x - p.x))
    }
}

/// Location and size of the largest vertical distance between a majorant and
/// the function it dominates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupGap {
    pub gap: f64,
    pub location: f64,
    /// Whether the supremum is attained by the left limit at `location`.
    pub left_limit: bool,
}

impl SupGap {
    fn offer(&mut self, gap: f64, location: f64, left_limit: bool) {
        if gap > self.gap {
            *self = SupGap {
                gap,
                location,
                left_limit,
            };
        }
    }
}

/// A function on a closed interval whose majorant can be built from finitely
/// many graph points.
pub trait Graph {
    fn domain(&self) -> (f64, f64);

    fn value_at(&self, x: f64) -> f64;

    /// Points whose upper hull is the least concave majorant of the
    /// restriction to `[lo, hi]`. Window endpoints are synthesized.
    fn restricted_points(&self, lo: f64, hi: f64) -> Vec<PlanePoint>;

    /// Abscissae where `env - self` can attain its supremum over `[lo, hi]`,
    /// paired with the function value (or left limit) at that abscissa.
    fn gap_candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64, bool)>;

    fn graph_points(&self) -> Vec<PlanePoint> {
        let (a, b) = self.domain();
        self.restricted_points(a, b)
    }

    fn majorant(&self) -> PolylineEnvelope {
        PolylineEnvelope {
            vertices: upper_hull(&self.graph_points()),
            orientation: Orientation::Concave,
        }
    }

    /// Supremum of `env - self` over `[lo, hi]`, computed exactly from the
    /// candidate abscissae. Ties resolve to the leftmost candidate.
    fn sup_gap_on(&self, env: &PolylineEnvelope, lo: f64, hi: f64) -> Result<SupGap> {
        let (a, b) = self.domain();
        if env.lower() != a || env.upper() != b {
            return input("envelope and function have different domains");
        }
        if !(lo <= hi) {
            return input(format!("empty window [{lo}, {hi}]"));
        }
        check_domain(lo, a, b)?;
        check_domain(hi, a, b)?;
        let mut best = SupGap {
            gap: f64::NEG_INFINITY,
            location: lo,
            left_limit: false,
        };
        for (x, y, left) in self.gap_candidates(lo, hi) {
            best.offer(env.eval_unchecked(x) - y, x, left);
        }
        Ok(best)
    }
}

impl Graph for CadlagStep {
    fn domain(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    fn value_at(&self, x: f64) -> f64 {
        CadlagStep::value_at(self, x)
    }

    fn restricted_points(&self, lo: f64, hi: f64) -> Vec<PlanePoint> {
        let start = self.jump_x.partition_point(|&x| x <= lo);
        let end = self.jump_x.partition_point(|&x| x <= hi);
        let mut out = Vec::with_capacity(end - start + 2);
        out.push(PlanePoint::new(lo, self.value_at(lo)));
        for i in start..end {
            let before = if i == 0 { self.base } else { self.jump_to[i - 1] };
            out.push(PlanePoint::new(self.jump_x[i], before.max(self.jump_to[i])));
        }
        if out.last().map(|p| p.x) != Some(hi) {
            out.push(PlanePoint::new(hi, self.value_at(hi)));
        }
        out
    }

    fn gap_candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64, bool)> {
        let start = self.jump_x.partition_point(|&x| x <= lo);
        let end = self.jump_x.partition_point(|&x| x <= hi);
        let mut out = Vec::with_capacity(2 * (end - start) + 2);
        out.push((lo, self.value_at(lo), false));
        for i in start..end {
            let before = if i == 0 { self.base } else { self.jump_to[i - 1] };
            out.push((self.jump_x[i], before, true));
            out.push((self.jump_x[i], self.jump_to[i], false));
        }
        out.push((hi, self.value_at(hi), false));
        out
    }
}

impl Graph for PointPath {
    fn domain(&self) -> (f64, f64) {
        (self.points[0].x, self.points[self.points.len() - 1].x)
    }

    fn value_at(&self, x: f64) -> f64 {
        PointPath::value_at(self, x)
    }

    fn restricted_points(&self, lo: f64, hi: f64) -> Vec<PlanePoint> {
        let start = self.points.partition_point(|p| p.x <= lo);
        let end = self.points.partition_point(|p| p.x < hi);
        let mut out = Vec::with_capacity(end.saturating_sub(start) + 2);
        out.push(PlanePoint::new(lo, self.value_at(lo)));
        if start < end {
            out.extend_from_slice(&self.points[start..end]);
        }
        if hi > lo {
            out.push(PlanePoint::new(hi, self.value_at(hi)));
        }
        out
    }

    fn gap_candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64, bool)> {
        self.restricted_points(lo, hi)
            .into_iter()
            .map(|p| (p.x, p.y, false))
            .collect()
    }
}

/// Supremum of `env - step` over the whole domain.
///
/// The candidates are both domain endpoints and every jump abscissa, taken
/// with the left limit and with the value; on each open piece between jumps
/// the envelope is linear and the step is constant.
pub fn sup_gap(step: &CadlagStep, env: &PolylineEnvelope) -> Result<SupGap> {
    step.sup_gap_on(env, step.lower, step.upper)
}

/// Least concave majorant of the restriction of `graph` to
/// `[center - halfwidth, center + halfwidth]`, clipped to the domain.
pub fn windowed_majorant<G: Graph + ?Sized>(graph: &G, center: f64, halfwidth: f64) -> Result<PolylineEnvelope> {
    if !(halfwidth > 0.0) || !center.is_finite() {
        return input(format!("window center {center}, halfwidth {halfwidth}"));
    }
    let (a, b) = graph.domain();
    let lo = (center - halfwidth).max(a);
    let hi = (center + halfwidth).min(b);
    if lo > hi {
        return Err(Error::Input(format!(
            "window around {center} misses the domain [{a}, {b}]"
        )));
    }
    Ok(PolylineEnvelope {
        vertices: upper_hull(&graph.restricted_points(lo, hi)),
        orientation: Orientation::Concave,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<PlanePoint> {
        v.iter().map(|&(x, y)| PlanePoint::new(x, y)).collect()
    }

    #[test]
    fn majorant_keeps_concave_input() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)]);
        let env = upper_concave_majorant(&p).unwrap();
        assert_eq!(env.vertices(), &p[..]);
    }

    #[test]
    fn majorant_drops_point_below_chord() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.2), (2.0, 1.0)]);
        let env = upper_concave_majorant(&p).unwrap();
        assert_eq!(env.vertices(), &pts(&[(0.0, 0.0), (2.0, 1.0)])[..]);
        assert_eq!(env.evaluate(1.0).unwrap(), 0.5);
    }

    #[test]
    fn majorant_of_single_point() {
        let env = upper_concave_majorant(&pts(&[(0.0, 0.3)])).unwrap();
        assert_eq!(env.vertices().len(), 1);
        assert_eq!(env.evaluate(0.0).unwrap(), 0.3);
        assert_eq!(env.left_slope(0.0).unwrap(), 0.0);
    }

    #[test]
    fn collinear_points_collapse() {
        let p = pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);
        let env = upper_concave_majorant(&p).unwrap();
        assert_eq!(env.vertices().len(), 2);
    }

    #[test]
    fn minorant_examples() {
        let p = pts(&[(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)]);
        let env = lower_convex_minorant(&p).unwrap();
        assert_eq!(env.vertices(), &pts(&[(0.0, 0.0), (2.0, 1.0)])[..]);
        assert_eq!(env.orientation(), Orientation::Convex);

        let q = pts(&[(0.0, 0.0), (1.0, 0.2), (2.0, 1.0)]);
        assert_eq!(lower_convex_minorant(&q).unwrap().vertices(), &q[..]);

        let line = pts(&[(0.0, 1.0), (2.0, 2.0)]);
        assert_eq!(lower_convex_minorant(&line).unwrap().vertices(), &line[..]);
        assert_eq!(upper_concave_majorant(&line).unwrap().vertices(), &line[..]);
    }

    #[test]
    fn rejects_bad_input() {
        let p = pts(&[(0.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(upper_concave_majorant(&p), Err(Error::Input(_))));
        let p = pts(&[(1.0, 0.0), (0.5, 1.0)]);
        assert!(matches!(lower_convex_minorant(&p), Err(Error::Input(_))));
        let p = pts(&[(0.0, f64::NAN)]);
        assert!(matches!(upper_concave_majorant(&p), Err(Error::Input(_))));
        assert!(upper_concave_majorant(&[]).is_err());
    }

    #[test]
    fn evaluation_and_slopes() {
        let env = upper_concave_majorant(&pts(&[(0.0, 0.0), (2.0, 1.0)])).unwrap();
        assert_eq!(env.evaluate(1.0).unwrap(), 0.5);
        assert_eq!(env.evaluate(0.0).unwrap(), 0.0);
        assert!(matches!(env.evaluate(2.5), Err(Error::Domain { .. })));

        let env = upper_concave_majorant(&pts(&[(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)])).unwrap();
        assert!((env.evaluate(1.5).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(env.left_slope(0.5).unwrap(), 0.8);
        assert_eq!(env.left_slope(1.0).unwrap(), 0.8);
        assert_eq!(env.left_slope(0.0).unwrap(), 0.8);
        assert!((env.left_slope(1.5).unwrap() - 0.2).abs() < 1e-15);
        assert!(env.left_slope(-0.1).is_err());
    }

    #[test]
    fn envelope_constructor_checks_shape() {
        let v = pts(&[(0.0, 0.0), (1.0, 0.2), (2.0, 1.0)]);
        assert!(PolylineEnvelope::new(v.clone(), Orientation::Concave).is_err());
        assert!(PolylineEnvelope::new(v, Orientation::Convex).is_ok());
    }

    #[test]
    fn step_evaluation() {
        let s = CadlagStep::new(0.0, 2.0, 0.0, vec![0.5, 1.5], vec![0.5, 1.0]).unwrap();
        assert_eq!(s.value_at(0.0), 0.0);
        assert_eq!(s.value_at(0.5), 0.5);
        assert_eq!(s.left_limit(0.5), 0.0);
        assert_eq!(s.value_at(2.0), 1.0);
        assert_eq!(s.jumps().collect::<Vec<_>>(), vec![(0.5, 0.5), (1.5, 0.5)]);
        assert!(CadlagStep::new(0.0, 1.0, 0.0, vec![0.0], vec![1.0]).is_err());
        assert!(CadlagStep::new(0.0, 1.0, 0.0, vec![0.6, 0.5], vec![1.0, 2.0]).is_err());
        assert!(CadlagStep::new(1.0, 1.0, 0.0, vec![], vec![]).is_err());
    }

    #[test]
    fn increments_merge_and_fold() {
        let s = CadlagStep::from_increments(0.0, 1.0, &[(0.0, 0.25), (0.5, 0.25), (0.5, 0.5)]).unwrap();
        assert_eq!(s.base_value(), 0.25);
        assert_eq!(s.jump_x(), &[0.5]);
        assert_eq!(s.jump_to(), &[1.0]);
        let z = CadlagStep::from_increments(0.0, 1.0, &[(0.5, 0.0)]).unwrap();
        assert!(z.jump_x().is_empty());
    }

    #[test]
    fn sup_gap_at_left_limit() {
        let s = CadlagStep::new(0.0, 2.0, 0.0, vec![1.0], vec![1.0]).unwrap();
        let env = upper_concave_majorant(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)])).unwrap();
        let g = sup_gap(&s, &env).unwrap();
        assert_eq!((g.gap, g.location, g.left_limit), (1.0, 1.0, true));
        assert_eq!(s.majorant(), env);
    }

    #[test]
    fn sup_gap_zero_function() {
        let s = CadlagStep::constant(0.0, 2.0, 0.0).unwrap();
        let env = s.majorant();
        assert_eq!(sup_gap(&s, &env).unwrap().gap, 0.0);
    }

    #[test]
    fn sup_gap_two_jumps_ties_to_leftmost() {
        let s = CadlagStep::new(0.0, 2.0, 0.0, vec![0.5, 1.5], vec![0.5, 1.0]).unwrap();
        let env = upper_concave_majorant(&pts(&[(0.0, 0.0), (0.5, 0.5), (1.5, 1.0), (2.0, 1.0)])).unwrap();
        assert_eq!(s.majorant(), env);
        let g = sup_gap(&s, &env).unwrap();
        assert_eq!((g.gap, g.location, g.left_limit), (0.5, 0.5, true));
    }

    #[test]
    fn sup_gap_domain_mismatch() {
        let s = CadlagStep::constant(0.0, 2.0, 0.0).unwrap();
        let env = upper_concave_majorant(&pts(&[(0.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!(matches!(sup_gap(&s, &env), Err(Error::Input(_))));
    }

    #[test]
    fn decreasing_step_uses_left_limits() {
        // Regression cusums can fall; the majorant must cover the left limit.
        let s = CadlagStep::new(0.0, 1.0, 0.0, vec![0.5], vec![-1.0]).unwrap();
        let env = s.majorant();
        assert_eq!(env.evaluate(0.5).unwrap(), 0.0);
        let g = sup_gap(&s, &env).unwrap();
        assert_eq!(g.gap, 1.0);
    }

    #[test]
    fn window_covering_domain_is_global() {
        let s = CadlagStep::new(0.0, 1.0, 0.0, vec![0.1, 0.3, 0.6, 0.9], vec![0.3, 0.5, 0.8, 1.0]).unwrap();
        assert_eq!(windowed_majorant(&s, 0.5, 10.0).unwrap(), s.majorant());
    }

    #[test]
    fn window_inside_touching_segment_agrees() {
        // Global majorant vertices at 0, 0.2, 0.8, 1; the step touches at 0.2 and 0.8.
        let s = CadlagStep::new(0.0, 1.0, 0.0, vec![0.2, 0.5, 0.8], vec![0.6, 0.8, 1.2]).unwrap();
        let global = s.majorant();
        assert_eq!(global.vertices().len(), 4);
        let local = windowed_majorant(&s, 0.5, 0.3).unwrap();
        assert_eq!(local.vertices(), &global.vertices()[1..3]);
        for i in 0..=60 {
            let x = 0.2 + 0.01 * i as f64;
            assert_eq!(local.evaluate(x).unwrap(), global.evaluate(x).unwrap());
        }
    }

    #[test]
    fn window_clipped_at_left_endpoint() {
        let s = CadlagStep::new(0.0, 1.0, 0.0, vec![0.1, 0.3, 0.6], vec![0.3, 0.5, 0.8]).unwrap();
        let local = windowed_majorant(&s, 0.0, 0.4).unwrap();
        assert_eq!(local.lower(), 0.0);
        assert_eq!(local.upper(), 0.4);
        assert_eq!(local.evaluate(0.4).unwrap(), 0.5);
        assert!(windowed_majorant(&s, 3.0, 0.5).is_err());
        assert!(windowed_majorant(&s, 0.5, 0.0).is_err());
    }

    #[test]
    fn path_window_interpolates_boundaries() {
        let path = PointPath::new(pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 1.0)])).unwrap();
        let local = windowed_majorant(&path, 1.0, 0.5).unwrap();
        assert_eq!(local.vertices(), &pts(&[(0.5, 0.5), (1.0, 1.0), (1.5, 1.0)])[..]);
    }
}
