//! Metric carriers, group actions, orbits and dimension diagnostics.

mod action;
mod covering;
mod quasi;

pub use action::{Generator, GroupAction};
pub use covering::{covering_number, orbital_dimension, orbital_dimension_multistart, DimensionReport};
pub use quasi::{quasi_invariance_constants, TestSet};

use crate::error::{Error, Result};
use rand::Rng;
use std::sync::Arc;

/// A point of the carrier, stored as raw coordinates.
///
/// Circle coordinates are kept reduced mod 1 into `[0, 1)`; the owning
/// [`MetricSpace`] normalizes on construction and after every action
/// application.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn scalar(v: f64) -> Self {
        Point { coords: vec![v] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<f64> for Point {
    fn from(v: f64) -> Self {
        Point::scalar(v)
    }
}

/// One-dimensional carrier kinds used as factors of product spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// `[0, 1)` with wraparound and metric `min(|x-y|, 1-|x-y|)`.
    Circle,
    /// Bounded window of the real line, Euclidean metric.
    Line { lo: f64, hi: f64 },
    /// Bounded window of the positive half line, Euclidean metric.
    HalfLine { lo: f64, hi: f64 },
}

impl Factor {
    fn validate(&self) -> Result<()> {
        match *self {
            Factor::Circle => Ok(()),
            Factor::Line { lo, hi } => {
                if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidConfig(format!("bad line window [{lo}, {hi}]")));
                }
                Ok(())
            }
            Factor::HalfLine { lo, hi } => {
                if !(0.0 < lo && lo < hi) || !hi.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "bad half-line window [{lo}, {hi}] (need 0 < lo < hi)"
                    )));
                }
                Ok(())
            }
        }
    }

    fn measure(&self) -> f64 {
        match *self {
            Factor::Circle => 1.0,
            Factor::Line { lo, hi } | Factor::HalfLine { lo, hi } => hi - lo,
        }
    }

    fn window(&self) -> (f64, f64) {
        match *self {
            Factor::Circle => (0.0, 1.0),
            Factor::Line { lo, hi } | Factor::HalfLine { lo, hi } => (lo, hi),
        }
    }

    pub(crate) fn wraps(&self) -> bool {
        matches!(self, Factor::Circle)
    }

    /// Distance between two coordinates of this factor.
    pub(crate) fn dist(&self, a: f64, b: f64) -> f64 {
        match self {
            Factor::Circle => {
                let d = (a - b).abs() % 1.0;
                d.min(1.0 - d)
            }
            _ => (a - b).abs(),
        }
    }

    /// Signed offset `a - b`, taking the short way around on the circle.
    pub(crate) fn offset(&self, a: f64, b: f64) -> f64 {
        match self {
            Factor::Circle => (a - b + 0.5).rem_euclid(1.0) - 0.5,
            _ => a - b,
        }
    }

    pub(crate) fn wrap(&self, v: f64) -> f64 {
        match self {
            Factor::Circle => {
                let w = v.rem_euclid(1.0);
                if w >= 1.0 {
                    0.0
                } else {
                    w
                }
            }
            _ => v,
        }
    }

    /// Whether `v` lies in the ambient set the factor lives in.
    fn contains_ambient(&self, v: f64) -> bool {
        match self {
            Factor::Circle | Factor::Line { .. } => v.is_finite(),
            Factor::HalfLine { .. } => v.is_finite() && v > 0.0,
        }
    }

    fn contains_window(&self, v: f64) -> bool {
        let (lo, hi) = self.window();
        match self {
            Factor::Circle => (0.0..1.0).contains(&v),
            _ => v >= lo && v <= hi,
        }
    }
}

/// Supported carrier shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Carrier {
    Circle,
    Line { lo: f64, hi: f64 },
    HalfLine { lo: f64, hi: f64 },
    /// Axis-aligned box, Euclidean metric.
    Box { bounds: Vec<(f64, f64)> },
    /// Tensor product of 1-D factors with the max metric.
    Product { factors: Vec<Factor> },
}

impl Carrier {
    fn factors(&self) -> Vec<Factor> {
        match self {
            Carrier::Circle => vec![Factor::Circle],
            Carrier::Line { lo, hi } => vec![Factor::Line { lo: *lo, hi: *hi }],
            Carrier::HalfLine { lo, hi } => vec![Factor::HalfLine { lo: *lo, hi: *hi }],
            Carrier::Box { bounds } => bounds
                .iter()
                .map(|&(lo, hi)| Factor::Line { lo, hi })
                .collect(),
            Carrier::Product { factors } => factors.clone(),
        }
    }
}

/// Design density with respect to the carrier's reference measure.
#[derive(Clone)]
pub enum DesignDensity {
    /// Constant density `1 / total measure`.
    Uniform,
    /// Arbitrary bounded density; must be resolvable on the quadrature grid.
    Custom(Arc<dyn Fn(&Point) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for DesignDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DesignDensity::Uniform => write!(f, "Uniform"),
            DesignDensity::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Metric space `(E, d)` with reference measure, quadrature grid and sampler.
#[derive(Debug, Clone)]
pub struct MetricSpace {
    carrier: Carrier,
    factors: Vec<Factor>,
    grid_per_dim: usize,
    quad_points: Arc<Vec<Point>>,
    quad_weights: Arc<Vec<f64>>,
}

impl MetricSpace {
    pub fn new(carrier: Carrier, grid_per_dim: usize) -> Result<Self> {
        let factors = carrier.factors();
        if factors.is_empty() {
            return Err(Error::InvalidConfig("carrier has no factors".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        if grid_per_dim < 2 {
            return Err(Error::InvalidConfig("quadrature grid needs >= 2 nodes per dimension".into()));
        }
        let (quad_points, quad_weights) = midpoint_grid(&factors, grid_per_dim);
        Ok(MetricSpace {
            carrier,
            factors,
            grid_per_dim,
            quad_points: Arc::new(quad_points),
            quad_weights: Arc::new(quad_weights),
        })
    }

    pub fn circle(grid: usize) -> Self {
        MetricSpace::new(Carrier::Circle, grid).expect("circle carrier is always valid")
    }

    pub fn line(lo: f64, hi: f64, grid: usize) -> Result<Self> {
        MetricSpace::new(Carrier::Line { lo, hi }, grid)
    }

    pub fn half_line(lo: f64, hi: f64, grid: usize) -> Result<Self> {
        MetricSpace::new(Carrier::HalfLine { lo, hi }, grid)
    }

    pub fn product(factors: Vec<Factor>, grid_per_dim: usize) -> Result<Self> {
        MetricSpace::new(Carrier::Product { factors }, grid_per_dim)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn grid_per_dim(&self) -> usize {
        self.grid_per_dim
    }

    pub fn total_measure(&self) -> f64 {
        self.factors.iter().map(Factor::measure).product()
    }

    /// Quadrature nodes and weights; weights sum to the total measure.
    pub fn quadrature(&self) -> (&[Point], &[f64]) {
        (&self.quad_points, &self.quad_weights)
    }

    /// Distance between two points.
    pub fn metric(&self, a: &Point, b: &Point) -> f64 {
        self.dist_coords(a.coords(), b.coords())
    }

    /// Distance on raw coordinate slices (hot path).
    pub fn dist_coords(&self, a: &[f64], b: &[f64]) -> f64 {
        match &self.carrier {
            Carrier::Circle => self.factors[0].dist(a[0], b[0]),
            Carrier::Line { .. } | Carrier::HalfLine { .. } => (a[0] - b[0]).abs(),
            Carrier::Box { .. } => {
                let s: f64 = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum();
                s.sqrt()
            }
            Carrier::Product { .. } => self
                .factors
                .iter()
                .enumerate()
                .map(|(i, f)| f.dist(a[i], b[i]))
                .fold(0.0, f64::max),
        }
    }

    /// Signed per-coordinate offset `a - b` (wrapped on circle factors).
    pub fn offset_coords(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        for (i, f) in self.factors.iter().enumerate() {
            out[i] = f.offset(a[i], b[i]);
        }
    }

    /// Normalize a point (reduce circle coordinates mod 1).
    pub fn wrap(&self, p: Point) -> Point {
        if !self.factors.iter().any(Factor::wraps) {
            return p;
        }
        let coords = p
            .coords
            .iter()
            .zip(&self.factors)
            .map(|(&v, f)| f.wrap(v))
            .collect();
        Point { coords }
    }

    /// Membership in the ambient set (dilation orbits may leave the window).
    pub fn contains_ambient(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords
                .iter()
                .zip(&self.factors)
                .all(|(&v, f)| f.contains_ambient(v))
    }

    /// Membership in the bounded window used for sampling and quadrature.
    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords
                .iter()
                .zip(&self.factors)
                .all(|(&v, f)| f.contains_window(v))
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        if !self.contains(p) {
            return Err(Error::OutsideCarrier(format!("{:?}", p.coords())));
        }
        Ok(())
    }

    /// Draw a point from the given design density.
    pub fn sample<R: Rng>(&self, design: &DesignDensity, rng: &mut R) -> Point {
        match design {
            DesignDensity::Uniform => self.sample_uniform(rng),
            DesignDensity::Custom(density) => {
                // Rejection against a grid-resolved bound.
                let bound = self
                    .quad_points
                    .iter()
                    .map(|p| density(p))
                    .fold(0.0, f64::max)
                    * 1.5
                    + 1e-300;
                loop {
                    let candidate = self.sample_uniform(rng);
                    let u: f64 = rng.random();
                    if u * bound <= density(&candidate) {
                        return candidate;
                    }
                }
            }
        }
    }

    fn sample_uniform<R: Rng>(&self, rng: &mut R) -> Point {
        let coords = self
            .factors
            .iter()
            .map(|f| {
                let (lo, hi) = f.window();
                lo + (hi - lo) * rng.random::<f64>()
            })
            .collect();
        Point { coords }
    }

    /// Density value of a design at a point.
    pub fn density_at(&self, design: &DesignDensity, p: &Point) -> f64 {
        match design {
            DesignDensity::Uniform => 1.0 / self.total_measure(),
            DesignDensity::Custom(density) => density(p),
        }
    }
}

fn midpoint_grid(factors: &[Factor], per_dim: usize) -> (Vec<Point>, Vec<f64>) {
    let axes: Vec<(Vec<f64>, f64)> = factors
        .iter()
        .map(|f| {
            let (lo, hi) = f.window();
            let step = (hi - lo) / per_dim as f64;
            let nodes = (0..per_dim)
                .map(|i| lo + (i as f64 + 0.5) * step)
                .collect();
            (nodes, step)
        })
        .collect();

    let total: usize = per_dim.pow(factors.len() as u32);
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; factors.len()];
    loop {
        let coords: Vec<f64> = idx.iter().zip(&axes).map(|(&i, (nodes, _))| nodes[i]).collect();
        let w: f64 = axes.iter().map(|(_, step)| *step).product();
        points.push(Point { coords });
        weights.push(w);
        // odometer increment
        let mut d = factors.len();
        loop {
            if d == 0 {
                return (points, weights);
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < per_dim {
                break;
            }
            idx[d] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_metric_symmetry_and_identity() {
        let sp = MetricSpace::circle(64);
        let a = Point::scalar(0.1);
        let b = Point::scalar(0.9);
        assert_eq!(sp.metric(&a, &b), sp.metric(&b, &a));
        assert_eq!(sp.metric(&a, &a), 0.0);
        // wraparound: 0.1 to 0.9 is 0.2 around the short way
        assert!((sp.metric(&a, &b) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn quad_weights_sum_to_measure() {
        let sp = MetricSpace::circle(2048);
        let (_, w) = sp.quadrature();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);

        let sp = MetricSpace::half_line(1.0, 4.0, 512).unwrap();
        let total: f64 = sp.quadrature().1.iter().sum();
        assert!(((total - 3.0) / 3.0).abs() < 1e-10);

        let sp = MetricSpace::product(
            vec![Factor::HalfLine { lo: 1.0, hi: 2.0 }, Factor::HalfLine { lo: 1.0, hi: 2.0 }],
            64,
        )
        .unwrap();
        let total: f64 = sp.quadrature().1.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert_eq!(sp.quadrature().0.len(), 64 * 64);
    }

    #[test]
    fn product_max_metric() {
        let sp = MetricSpace::product(
            vec![Factor::Line { lo: 0.0, hi: 1.0 }, Factor::Line { lo: 0.0, hi: 1.0 }],
            8,
        )
        .unwrap();
        let a = Point::new(vec![0.1, 0.2]);
        let b = Point::new(vec![0.4, 0.3]);
        assert!((sp.metric(&a, &b) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn wrap_reduces_circle_coords() {
        let sp = MetricSpace::circle(16);
        let p = sp.wrap(Point::scalar(1.75));
        assert!((p.coords()[0] - 0.75).abs() < 1e-15);
        let q = sp.wrap(Point::scalar(-0.25));
        assert!((q.coords()[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn uniform_sampler_stays_in_window() {
        use rand::SeedableRng;
        let sp = MetricSpace::half_line(1.0, 4.0, 32).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = sp.sample(&DesignDensity::Uniform, &mut rng);
            assert!(sp.contains(&p));
        }
    }

    #[test]
    fn half_line_rejects_bad_window() {
        assert!(MetricSpace::half_line(-1.0, 4.0, 32).is_err());
        assert!(MetricSpace::line(2.0, 1.0, 32).is_err());
    }
}
