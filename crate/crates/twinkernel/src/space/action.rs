//! Cyclic group actions generated by a single map and its inverse.

use super::{MetricSpace, Point};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Generator of the cyclic group, applied coordinatewise for products.
#[derive(Clone)]
pub enum Generator {
    Identity,
    /// `x -> x + alpha mod 1` on the circle.
    Rotation { alpha: f64 },
    /// `x -> factor * x`.
    Dilation { factor: f64 },
    /// `x -> x + shift`.
    Translation { shift: f64 },
    /// Independent 1-D generators per coordinate, all driven by the same power.
    Product { components: Vec<Generator> },
    /// Arbitrary forward/inverse pair; powers are applied by iteration.
    Custom {
        forward: Arc<dyn Fn(&Point) -> Point + Send + Sync>,
        inverse: Arc<dyn Fn(&Point) -> Point + Send + Sync>,
    },
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::Identity => write!(f, "Identity"),
            Generator::Rotation { alpha } => write!(f, "Rotation {{ alpha: {alpha} }}"),
            Generator::Dilation { factor } => write!(f, "Dilation {{ factor: {factor} }}"),
            Generator::Translation { shift } => write!(f, "Translation {{ shift: {shift} }}"),
            Generator::Product { components } => f.debug_struct("Product").field("components", components).finish(),
            Generator::Custom { .. } => write!(f, "Custom(..)"),
        }
    }
}

impl Generator {
    fn default_max_power(&self) -> i64 {
        match self {
            Generator::Identity | Generator::Rotation { .. } | Generator::Translation { .. } => 1 << 20,
            // factor^k must stay a normal f64
            Generator::Dilation { factor } => {
                let l2 = factor.abs().log2().abs().max(1e-12);
                ((700.0 / l2) as i64).clamp(1, 1 << 20)
            }
            Generator::Product { components } => components
                .iter()
                .map(Generator::default_max_power)
                .min()
                .unwrap_or(1 << 20),
            Generator::Custom { .. } => 4096,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Generator::Dilation { factor } => {
                if !factor.is_finite() || *factor <= 0.0 || *factor == 1.0 {
                    return Err(Error::InvalidConfig(format!(
                        "dilation factor must be positive and != 1, got {factor}"
                    )));
                }
                Ok(())
            }
            Generator::Rotation { alpha } => {
                if !alpha.is_finite() {
                    return Err(Error::InvalidConfig("rotation angle must be finite".into()));
                }
                Ok(())
            }
            Generator::Translation { shift } => {
                if !shift.is_finite() {
                    return Err(Error::InvalidConfig("translation shift must be finite".into()));
                }
                Ok(())
            }
            Generator::Product { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidConfig("product action needs components".into()));
                }
                for c in components {
                    if matches!(c, Generator::Product { .. } | Generator::Custom { .. }) {
                        return Err(Error::InvalidConfig(
                            "product action components must be 1-D closed-form generators".into(),
                        ));
                    }
                    c.validate()?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Closed-form power application on one coordinate.
    fn apply_scalar(&self, k: i64, v: f64) -> f64 {
        match self {
            Generator::Identity => v,
            Generator::Rotation { alpha } => (v + k as f64 * alpha).rem_euclid(1.0),
            Generator::Dilation { factor } => factor.powi(k as i32) * v,
            Generator::Translation { shift } => v + k as f64 * shift,
            Generator::Product { .. } | Generator::Custom { .. } => {
                unreachable!("scalar application is only defined for 1-D closed-form generators")
            }
        }
    }

    pub(crate) fn is_closed_form(&self) -> bool {
        !matches!(self, Generator::Custom { .. })
    }
}

/// The cyclic group `G` acting on the carrier, with a guaranteed power range.
#[derive(Debug, Clone)]
pub struct GroupAction {
    generator: Generator,
    max_power: i64,
}

impl GroupAction {
    pub fn new(generator: Generator, max_power: i64) -> Result<Self> {
        generator.validate()?;
        if max_power < 1 {
            return Err(Error::InvalidConfig("max_power must be >= 1".into()));
        }
        Ok(GroupAction { generator, max_power })
    }

    pub fn with_default_power(generator: Generator) -> Result<Self> {
        let max_power = generator.default_max_power();
        GroupAction::new(generator, max_power)
    }

    pub fn identity() -> Self {
        GroupAction::with_default_power(Generator::Identity).unwrap()
    }

    pub fn rotation(alpha: f64) -> Result<Self> {
        GroupAction::with_default_power(Generator::Rotation { alpha })
    }

    pub fn dilation(factor: f64) -> Result<Self> {
        GroupAction::with_default_power(Generator::Dilation { factor })
    }

    pub fn translation(shift: f64) -> Result<Self> {
        GroupAction::with_default_power(Generator::Translation { shift })
    }

    pub fn product(components: Vec<Generator>) -> Result<Self> {
        GroupAction::with_default_power(Generator::Product { components })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn max_power(&self) -> i64 {
        self.max_power
    }

    pub fn check_power(&self, k: i64) -> Result<()> {
        if k.abs() > self.max_power {
            return Err(Error::PowerOverflow { k, max_power: self.max_power });
        }
        Ok(())
    }

    /// Apply `phi^k` to a point. Closed-form generators evaluate directly;
    /// custom generators iterate |k| times.
    pub fn apply_power(&self, k: i64, x: &Point) -> Result<Point> {
        self.check_power(k)?;
        match &self.generator {
            Generator::Custom { forward, inverse } => {
                let mut p = x.clone();
                let map = if k >= 0 { forward } else { inverse };
                for _ in 0..k.unsigned_abs() {
                    p = map(&p);
                }
                Ok(p)
            }
            Generator::Product { components } => {
                if x.dim() != components.len() {
                    return Err(Error::DimensionMismatch { expected: components.len(), got: x.dim() });
                }
                let coords = x
                    .coords()
                    .iter()
                    .zip(components)
                    .map(|(&v, g)| g.apply_scalar(k, v))
                    .collect();
                Ok(Point::new(coords))
            }
            g => {
                let coords = x.coords().iter().map(|&v| g.apply_scalar(k, v)).collect();
                Ok(Point::new(coords))
            }
        }
    }

    /// Apply `phi^k` on a raw coordinate slice (hot path; closed-form only).
    pub(crate) fn apply_power_coords(&self, k: i64, src: &[f64], dst: &mut [f64]) {
        match &self.generator {
            Generator::Product { components } => {
                for (i, g) in components.iter().enumerate() {
                    dst[i] = g.apply_scalar(k, src[i]);
                }
            }
            Generator::Custom { .. } => {
                let p = self
                    .apply_power(k, &Point::new(src.to_vec()))
                    .expect("power checked by caller");
                dst.copy_from_slice(p.coords());
            }
            g => {
                for (i, &v) in src.iter().enumerate() {
                    dst[i] = g.apply_scalar(k, v);
                }
            }
        }
    }

    /// The orbit `{phi^k x : -n_max <= k <= n_max}`; index 0 holds `k = -n_max`.
    pub fn orbit(&self, x: &Point, n_max: i64) -> Result<Vec<Point>> {
        if n_max < 0 {
            return Err(Error::InvalidInput("orbit needs n_max >= 0".into()));
        }
        self.check_power(n_max)?;
        let mut points = Vec::with_capacity(2 * n_max as usize + 1);
        for k in -n_max..=n_max {
            points.push(self.apply_power(k, x)?);
        }
        Ok(points)
    }
}

/// Wrap circle coordinates after applying an action power.
pub fn apply_power_wrapped(space: &MetricSpace, action: &GroupAction, k: i64, x: &Point) -> Result<Point> {
    Ok(space.wrap(action.apply_power(k, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rotation_power_example() {
        // alpha = 0.25, k = 2, x = 0.1 -> 0.6
        let act = GroupAction::rotation(0.25).unwrap();
        let y = act.apply_power(2, &Point::scalar(0.1)).unwrap();
        assert!((y.coords()[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn zero_power_is_identity() {
        let act = GroupAction::dilation(2.0).unwrap();
        let x = Point::scalar(3.7);
        assert_eq!(act.apply_power(0, &x).unwrap(), x);
    }

    #[test]
    fn dilation_inverse_power() {
        // phi: x -> 2x, k = -1, x = 4 -> 2
        let act = GroupAction::dilation(2.0).unwrap();
        let y = act.apply_power(-1, &Point::scalar(4.0)).unwrap();
        assert!((y.coords()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn power_overflow_is_an_error() {
        let act = GroupAction::new(Generator::Dilation { factor: 2.0 }, 8).unwrap();
        let e = act.apply_power(9, &Point::scalar(1.0)).unwrap_err();
        assert!(matches!(e, Error::PowerOverflow { .. }));
    }

    #[test]
    fn orbit_identity_action() {
        let act = GroupAction::identity();
        let orbit = act.orbit(&Point::scalar(0.3), 5).unwrap();
        assert_eq!(orbit.len(), 11);
        assert!(orbit.iter().all(|p| p == &Point::scalar(0.3)));
    }

    #[test]
    fn orbit_period_two_rotation() {
        let act = GroupAction::rotation(0.5).unwrap();
        let orbit = act.orbit(&Point::scalar(0.0), 2).unwrap();
        let got: Vec<f64> = orbit.iter().map(|p| p.coords()[0]).collect();
        let want = [0.0, 0.5, 0.0, 0.5, 0.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn orbit_dyadic_dilation() {
        let act = GroupAction::dilation(2.0).unwrap();
        let orbit = act.orbit(&Point::scalar(1.0), 2).unwrap();
        let got: Vec<f64> = orbit.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(got, vec![0.25, 0.5, 1.0, 2.0, 4.0]);
    }

    #[test]
    fn group_law_on_random_triples() {
        // apply_power(k+m, x) == apply_power(k, apply_power(m, x)) within 1e-10
        let sp = MetricSpace::circle(64);
        let actions = [
            GroupAction::rotation(0.6180339887498949).unwrap(),
            GroupAction::identity(),
            GroupAction::translation(0.1).unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = &actions[rng.random_range(0..actions.len())];
            let k = rng.random_range(-64..=64i64);
            let m = rng.random_range(-64..=64i64);
            let x = Point::scalar(rng.random::<f64>());
            let lhs = a.apply_power(k + m, &x).unwrap();
            let rhs = a.apply_power(k, &a.apply_power(m, &x).unwrap()).unwrap();
            let d = sp.metric(&sp.wrap(lhs), &sp.wrap(rhs));
            assert!(d < 1e-10, "group law violated: d = {d}");
        }
        // dilation with values away from the circle metric
        let line = MetricSpace::line(-1e6, 1e6, 16).unwrap();
        let act = GroupAction::dilation(2.0).unwrap();
        for _ in 0..1000 {
            let k = rng.random_range(-16..=16i64);
            let m = rng.random_range(-16..=16i64);
            let x = Point::scalar(rng.random::<f64>() * 4.0 + 0.5);
            let lhs = act.apply_power(k + m, &x).unwrap();
            let rhs = act.apply_power(k, &act.apply_power(m, &x).unwrap()).unwrap();
            assert!(line.metric(&lhs, &rhs) / lhs.coords()[0].abs().max(1.0) < 1e-10);
        }
    }

    #[test]
    fn custom_generator_iterates() {
        let fwd = Arc::new(|p: &Point| Point::scalar(p.coords()[0] + 1.0));
        let inv = Arc::new(|p: &Point| Point::scalar(p.coords()[0] - 1.0));
        let act = GroupAction::new(Generator::Custom { forward: fwd, inverse: inv }, 100).unwrap();
        let y = act.apply_power(5, &Point::scalar(0.0)).unwrap();
        assert_eq!(y.coords()[0], 5.0);
        let z = act.apply_power(-3, &y).unwrap();
        assert_eq!(z.coords()[0], 2.0);
    }
}
