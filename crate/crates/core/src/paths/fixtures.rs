//! Small hand-built paths with known variation values.

use std::f64::consts::PI;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

use super::norm::NormKind;
use super::sampled::SampledPath;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fixture {
    /// Three points on the unit circle at angles `2πk/3`, times `0, 1, 2`.
    Circle3,
    /// `0, 1, −1` at times `−1, 0, 1`.
    StepSplit,
    /// `(ln k / k)^{1/p}` at `t = 1/k`, `k = 2..=n`, zero elsewhere.
    LogSeq { p: f64, n: usize },
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Circle3 => "circle3",
            Fixture::StepSplit => "stepSplit",
            Fixture::LogSeq { .. } => "logSeq",
        }
    }
}

/// Parses a fixture name; `logSeq` needs its parameters from elsewhere, so it
/// parses with `p = 2`, `n = 16` and callers override them.
impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle3" => Ok(Fixture::Circle3),
            "stepSplit" => Ok(Fixture::StepSplit),
            "logSeq" => Ok(Fixture::LogSeq { p: 2.0, n: 16 }),
            other => Err(Error::UnknownFixture(other.to_string())),
        }
    }
}

pub fn gen_fixture(fixture: Fixture) -> Result<SampledPath> {
    match fixture {
        Fixture::Circle3 => {
            let values = (0..3)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / 3.0;
                    vec![a.cos(), a.sin()]
                })
                .collect();
            SampledPath::new(vec![0.0, 1.0, 2.0], values, NormKind::Euclidean)
        }
        Fixture::StepSplit => SampledPath::scalar(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, -1.0]),
        Fixture::LogSeq { p, n } => log_seq(p, n),
    }
}

/// The `logSeq` path on `[0, 1]`.
///
/// Samples: `0` at `t = 0`, then for `k = n, n−1, …, 1` the value
/// `(ln k / k)^{1/p}` at `t = 1/k`, with an explicit zero sample at the midpoint
/// between consecutive sequence times. The function is zero off the sequence,
/// and the interleaved zeros make every bump visible to the discrete
/// functionals. The sample at `t = 1` is `0` since `ln 1 = 0`.
pub fn log_seq(p: f64, n: usize) -> Result<SampledPath> {
    if !(p > 1.0) {
        return Err(invalid("p", "logSeq needs p > 1"));
    }
    if n < 2 {
        return Err(invalid("n", "logSeq needs n >= 2"));
    }
    let bump = |k: usize| {
        let k = k as f64;
        (k.ln() / k).powf(1.0 / p)
    };
    let mut times = vec![0.0];
    let mut values = vec![0.0];
    for k in (1..=n).rev() {
        let t = 1.0 / k as f64;
        if k < n {
            let prev = 1.0 / (k + 1) as f64;
            times.push(0.5 * (prev + t));
            values.push(0.0);
        }
        times.push(t);
        values.push(bump(k));
    }
    SampledPath::scalar(times, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::sampled::MetricPath;

    #[test]
    fn circle3_is_equilateral() {
        let p = gen_fixture(Fixture::Circle3).unwrap();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert!((p.dist(i, j) - 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn log_seq_smallest() {
        let p = log_seq(2.0, 2).unwrap();
        assert_eq!(p.times(), &[0.0, 0.5, 0.75, 1.0]);
        let v = p.flat_values();
        assert_eq!(v[1], (2f64.ln() / 2.0).sqrt());
        assert_eq!(v.iter().filter(|x| **x != 0.0).count(), 1);
        assert_eq!(v[3], 0.0);
    }

    #[test]
    fn log_seq_rejects_bad_parameters() {
        assert!(log_seq(1.0, 10).is_err());
        assert!(log_seq(2.0, 1).is_err());
        assert!(matches!("nope".parse::<Fixture>(), Err(Error::UnknownFixture(_))));
    }
}
