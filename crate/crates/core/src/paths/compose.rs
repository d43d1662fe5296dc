//! Time changes and pointwise maps: `t ↦ G(X(A(t)))`.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};

use super::sampled::{MetricPath, SampledPath};

/// A piecewise-monotone change of time.
#[derive(Clone)]
pub enum TimeChange {
    Identity,
    /// `A(t) = a + b − t` on the path range `[a, b]`.
    Reversal,
    /// Piecewise-linear interpolation through `(t, A(t))` knots; each linear
    /// piece is monotone, so the map is piecewise monotone by construction.
    PiecewiseLinear(Vec<(f64, f64)>),
}

/// A coordinatewise map `G: R → R`.
#[derive(Clone)]
pub enum PointMap {
    Identity,
    Scale(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl PointMap {
    fn apply(&self, x: f64) -> f64 {
        match self {
            PointMap::Identity => x,
            PointMap::Scale(s) => s * x,
            PointMap::Custom(g) => g(x),
        }
    }
}

impl TimeChange {
    fn validate(&self) -> Result<()> {
        if let TimeChange::PiecewiseLinear(knots) = self {
            if knots.len() < 2 {
                return Err(invalid("time_change", "need at least two knots"));
            }
            if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return Err(invalid("time_change", "knot times must increase"));
            }
        }
        Ok(())
    }

    fn apply(&self, t: f64, a: f64, b: f64) -> f64 {
        match self {
            TimeChange::Identity => t,
            TimeChange::Reversal => a + b - t,
            TimeChange::PiecewiseLinear(knots) => {
                let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
                let (t0, s0) = knots[i - 1];
                let (t1, s1) = knots[i];
                s0 + (t - t0) / (t1 - t0) * (s1 - s0)
            }
        }
    }
}

/// Returns the path on the original time grid whose value at `t_i` is
/// `G(X(A(t_i)))`, where `X` is looked up at the nearest sample at or left of
/// `A(t_i)`. Lookups snap to a sample within `1e-9` of the range to absorb
/// rounding in `A`.
pub fn compose(path: &SampledPath, time_change: &TimeChange, point_map: &PointMap) -> Result<SampledPath> {
    time_change.validate()?;
    let (a, b) = (path.start(), path.end());
    let slack = 1e-9 * (b - a).max(1.0);
    let times = path.times();
    let mut data = Vec::with_capacity(path.len() * path.dim());
    for &t in times {
        let s = time_change.apply(t, a, b);
        if !s.is_finite() || s < a - slack || s > b + slack {
            return Err(Error::TimeChangeOutOfRange(t));
        }
        let idx = times.partition_point(|&u| u <= s + slack).saturating_sub(1);
        data.extend(path.value(idx).iter().map(|&x| point_map.apply(x)));
    }
    SampledPath::from_flat(times.to_vec(), data, path.dim(), path.norm_kind())
}
