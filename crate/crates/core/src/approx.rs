//! Greedy bounded-variation approximants within uniform distance `c/2` (step)
//! or `c` (piecewise linear), and the two-sided bounds they certify.
//!
//! The skeleton walks forward from `a`. At each skeleton time `τ` it looks at
//! the increment to the next sample, the discrete stand-in for `f(τ+)`. If that
//! increment is below `c/2` the reference point is `f(τ)`; otherwise it is the
//! next sample. The next skeleton time is the first later sample strictly more
//! than `c/2` away from the reference.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::paths::{MetricPath, NormKind, SampledPath};
use crate::variation::ttv_profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    SmallJump,
    BigJump,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedySkeleton {
    pub taus: Vec<f64>,
    /// Sample index of each skeleton time.
    pub indices: Vec<usize>,
    /// Branch taken at each skeleton time.
    pub branches: Vec<Branch>,
}

fn check_c(c: f64) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("c", "accuracy must be positive and finite"));
    }
    Ok(())
}

pub fn greedy_skeleton(path: &SampledPath, c: f64) -> Result<GreedySkeleton> {
    check_c(c)?;
    let n = path.len();
    let half = c / 2.0;
    let mut sk = GreedySkeleton {
        taus: Vec::new(),
        indices: Vec::new(),
        branches: Vec::new(),
    };
    let mut i = 0;
    loop {
        let branch = if i + 1 < n && path.dist(i, i + 1) >= half {
            Branch::BigJump
        } else {
            Branch::SmallJump
        };
        sk.taus.push(path.times()[i]);
        sk.indices.push(i);
        sk.branches.push(branch);
        let reference = match branch {
            Branch::SmallJump => i,
            Branch::BigJump => i + 1,
        };
        match (i + 1..n).find(|&j| path.dist(j, reference) > half) {
            Some(j) => i = j,
            None => break,
        }
    }
    Ok(sk)
}

/// Step approximant `f^c` on the sample grid of `path`.
pub fn step_approx(path: &SampledPath, c: f64) -> Result<SampledPath> {
    let sk = greedy_skeleton(path, c)?;
    step_from_skeleton(path, &sk)
}

fn step_from_skeleton(path: &SampledPath, sk: &GreedySkeleton) -> Result<SampledPath> {
    let n = path.len();
    let mut data = Vec::with_capacity(n * path.dim());
    for (s, (&start, &branch)) in sk.indices.iter().zip(&sk.branches).enumerate() {
        let stop = sk.indices.get(s + 1).copied().unwrap_or(n);
        data.extend_from_slice(path.value(start));
        let held = match branch {
            Branch::SmallJump => start,
            Branch::BigJump => start + 1,
        };
        for _ in start + 1..stop {
            data.extend_from_slice(path.value(held));
        }
    }
    SampledPath::from_flat(path.times().to_vec(), data, path.dim(), path.norm_kind())
}

/// A skeleton time with its left limit, value, and right limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Knot {
    pub time: f64,
    pub before: Vec<f64>,
    pub value: Vec<f64>,
    pub after: Vec<f64>,
    /// Whether the segment ending at this knot interpolates (true) or is held.
    pub interpolated_into: bool,
}

/// Piecewise-linear approximant `f^{c,lin}`: between consecutive knots it runs
/// linearly from the left knot's `after` to the right knot's `before`, and it
/// is constant from the last knot to `end`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearApproximant {
    pub knots: Vec<Knot>,
    pub end: f64,
    pub norm: NormKind,
}

impl LinearApproximant {
    pub fn dim(&self) -> usize {
        self.knots[0].value.len()
    }

    /// Value at `t ∈ [a, end]`; at a knot time this is the knot's own value.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let k = self.knots.partition_point(|k| k.time <= t).max(1) - 1;
        let knot = &self.knots[k];
        if t == knot.time {
            return knot.value.clone();
        }
        match self.knots.get(k + 1) {
            None => knot.after.clone(),
            Some(next) => {
                let w = (t - knot.time) / (next.time - knot.time);
                knot.after.iter().zip(&next.before).map(|(x, y)| x + w * (y - x)).collect()
            }
        }
    }

    /// Segment lengths plus the jumps at knots.
    pub fn total_variation(&self) -> f64 {
        let nk = self.norm;
        let mut tv = 0.0;
        for (i, k) in self.knots.iter().enumerate() {
            if i > 0 {
                tv += nk.dist(&self.knots[i - 1].after, &k.before);
            }
            tv += nk.dist(&k.before, &k.value);
            tv += nk.dist(&k.value, &k.after);
        }
        tv
    }

    /// The approximant evaluated on the given (increasing) times.
    pub fn sample(&self, times: &[f64]) -> Result<SampledPath> {
        let dim = self.dim();
        let mut data = Vec::with_capacity(times.len() * dim);
        for &t in times {
            data.extend(self.eval(t));
        }
        SampledPath::from_flat(times.to_vec(), data, dim, self.norm)
    }

    /// Times where the approximant is discontinuous.
    pub fn jump_times(&self) -> Vec<f64> {
        self.knots
            .iter()
            .filter(|k| k.before != k.value || k.value != k.after)
            .map(|k| k.time)
            .collect()
    }
}

/// `f^{c,lin}` with continuity threshold `eps_cont ≥ 0`: the approximant
/// interpolates into `τ_n` when the source increment into `τ_n` is at most
/// `eps_cont`, and holds its level (jumping at `τ_n`) otherwise. On samples
/// it stays within `c + eps_cont` of the path, so within `c` at the default 0.
pub fn linear_approx(path: &SampledPath, c: f64, eps_cont: f64) -> Result<LinearApproximant> {
    if !(eps_cont >= 0.0) {
        return Err(invalid("eps_cont", "continuity threshold must be nonnegative"));
    }
    let sk = greedy_skeleton(path, c)?;
    let mut knots: Vec<Knot> = Vec::with_capacity(sk.taus.len());
    for (s, (&i, &branch)) in sk.indices.iter().zip(&sk.branches).enumerate() {
        let value = path.value(i).to_vec();
        let after = match branch {
            Branch::SmallJump => value.clone(),
            Branch::BigJump => path.value(i + 1).to_vec(),
        };
        let (before, interpolated_into) = if s == 0 {
            (value.clone(), false)
        } else if path.dist(i - 1, i) <= eps_cont {
            (value.clone(), true)
        } else {
            (knots[s - 1].after.clone(), false)
        };
        knots.push(Knot {
            time: sk.taus[s],
            before,
            value,
            after,
            interpolated_into,
        });
    }
    Ok(LinearApproximant {
        knots,
        end: path.end(),
        norm: path.norm_kind(),
    })
}

/// Either kind of approximant.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    Step(SampledPath),
    Linear(LinearApproximant),
}

impl Approximant {
    pub fn total_variation(&self) -> f64 {
        match self {
            Approximant::Step(p) => crate::variation::total_variation(p),
            Approximant::Linear(l) => l.total_variation(),
        }
    }

    /// `max_i ‖f(t_i) − approximant(t_i)‖` over the samples of `path`.
    pub fn sup_distance(&self, path: &SampledPath) -> f64 {
        let nk = path.norm_kind();
        (0..path.len())
            .map(|i| match self {
                Approximant::Step(p) => nk.dist(path.value(i), p.value(i)),
                Approximant::Linear(l) => nk.dist(path.value(i), &l.eval(path.times()[i])),
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sandwich {
    /// `TTV(f, c)`.
    pub lower: f64,
    /// `min_λ λ·TTV(f, (λ−1)c/(2λ))` over the supplied λ.
    pub upper: f64,
    /// `TV(f^c)`.
    pub witness_tv: f64,
}

pub fn sandwich(path: &SampledPath, c: f64, lambdas: &[f64]) -> Result<Sandwich> {
    check_c(c)?;
    if lambdas.is_empty() {
        return Err(invalid("lambda", "need at least one lambda"));
    }
    if lambdas.iter().any(|l| !(*l > 1.0) || !l.is_finite()) {
        return Err(invalid("lambda", "every lambda must be a finite number > 1"));
    }
    let profile = ttv_profile(path);
    let upper = lambdas
        .iter()
        .map(|&l| l * profile.ttv((l - 1.0) * c / (2.0 * l)))
        .fold(f64::INFINITY, f64::min);
    let witness = step_approx(path, c)?;
    Ok(Sandwich {
        lower: profile.ttv(c),
        upper,
        witness_tv: crate::variation::total_variation(&witness),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{gen_fixture, Fixture};
    use crate::variation::{total_variation, ttv};

    fn ramp() -> SampledPath {
        SampledPath::scalar((0..=10).map(|i| i as f64 / 10.0).collect(), (0..=10).map(|i| i as f64 / 10.0).collect())
            .unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn ramp_skeleton_and_step() {
        let r = ramp();
        let sk = greedy_skeleton(&r, 0.5).unwrap();
        assert!(close(&sk.taus, &[0.0, 0.3, 0.6, 0.9]));
        assert!(sk.branches.iter().all(|b| *b == Branch::SmallJump));
        let s = step_approx(&r, 0.5).unwrap();
        let tv = total_variation(&s);
        assert!((tv - 0.9).abs() < 1e-12);
        assert!(tv <= 2.0 * ttv(&r, 0.125).unwrap());
        assert!((2.0 * ttv(&r, 0.125).unwrap() - 1.75).abs() < 1e-12);
    }

    #[test]
    fn circle3_follows_the_two_branch_rule() {
        let f = gen_fixture(Fixture::Circle3).unwrap();
        let c = 3f64.sqrt();
        let sk = greedy_skeleton(&f, c).unwrap();
        assert_eq!(sk.indices, vec![0, 2]);
        assert_eq!(sk.branches, vec![Branch::BigJump, Branch::SmallJump]);
        assert_eq!(step_approx(&f, c).unwrap(), f);
        let s = sandwich(&f, c, &[2.0]).unwrap();
        assert!(s.lower < 1e-15);
        assert!((s.witness_tv - 2.0 * c).abs() < 1e-12);
        assert!((s.upper - 3.0 * c).abs() < 1e-12);
    }

    #[test]
    fn constant_path() {
        let f = SampledPath::scalar(vec![0.0, 1.0, 2.0], vec![5.0; 3]).unwrap();
        let sk = greedy_skeleton(&f, 1.0).unwrap();
        assert_eq!(sk.taus, vec![0.0]);
        assert_eq!(step_approx(&f, 1.0).unwrap(), f);
        let lin = linear_approx(&f, 1.0, 0.0).unwrap();
        assert_eq!(lin.total_variation(), 0.0);
        let s = sandwich(&f, 1.0, &[2.0]).unwrap();
        assert_eq!((s.lower, s.upper, s.witness_tv), (0.0, 0.0, 0.0));
    }

    #[test]
    fn ramp_linear_interpolates_with_threshold() {
        let r = ramp();
        let step_tv = total_variation(&step_approx(&r, 0.5).unwrap());
        let lin = linear_approx(&r, 0.5, 0.1 + 1e-12).unwrap();
        assert!(lin.knots[1..].iter().all(|k| k.interpolated_into));
        assert!(lin.jump_times().is_empty());
        assert_eq!(lin.total_variation(), step_tv);
        assert!((lin.eval(0.45)[0] - 0.45).abs() < 1e-12);
        assert!((lin.eval(1.0)[0] - 0.9).abs() < 1e-12);
        let held = linear_approx(&r, 0.5, 0.0).unwrap();
        assert_eq!(held.total_variation(), step_tv);
        assert!(Approximant::Linear(held).sup_distance(&r) <= 0.5);
    }

    #[test]
    fn step_split_linear() {
        let f = gen_fixture(Fixture::StepSplit).unwrap();
        let step = step_approx(&f, 1.0).unwrap();
        let lin = linear_approx(&f, 1.0, 0.0).unwrap();
        assert_eq!(lin.total_variation(), total_variation(&step));
        assert!(Approximant::Linear(lin).sup_distance(&f) <= 1.0);
        assert!(Approximant::Step(step).sup_distance(&f) <= 0.5);
    }

    #[test]
    fn parameter_domain() {
        let r = ramp();
        assert!(greedy_skeleton(&r, 0.0).is_err());
        assert!(linear_approx(&r, 1.0, -1.0).is_err());
        assert!(sandwich(&r, 1.0, &[1.0]).is_err());
        assert!(sandwich(&r, 1.0, &[]).is_err());
    }
}
