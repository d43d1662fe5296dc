//! The p-TV seminorm `(sup_{δ>0} δ^{p−1}·TTV(f, δ))^{1/p}` and its norm.
//!
//! For a single increment `x`, `sup_δ δ^{p−1}(x − δ)₊ = c_p·x^p`, attained at
//! `δ = x(p−1)/p`. Writing the truncated variation through the pair profile,
//! `TTV(δ) = max_k (M_k − kδ)₊`, the suprema over `δ` and `k` commute and
//!
//! ```text
//! ‖f‖_{p-TV}^p = max_k c_p·M_k^p / k^{p−1},   δ*_k = M_k(p−1)/(kp).
//! ```

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::paths::MetricPath;
use crate::variation::{ttv_profile, TtvProfile};

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid("p", "exponent must be a finite number >= 1"));
    }
    Ok(())
}

/// `c_p = (p−1)^{p−1}/p^p`, with `0^0 = 1` so that `c_1 = 1`.
pub fn c_p_const(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok((p - 1.0).powf(p - 1.0) / p.powf(p))
}

/// `sup_{δ>0} δ^{p−1}(x − δ)₊ = c_p·x^p`.
pub fn sup_delta_single(x: f64, p: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", "must be nonnegative"));
    }
    Ok(c_p_const(p)? * x.powf(p))
}

/// `(sup_δ δ^{p−1}·Σ(x_i − δ)₊)^{1/p}` for a fixed set of increments, via the
/// nondecreasing rearrangement: the best δ keeps only the top `m` increments.
pub fn fixed_partition_seminorm(increments: &[f64], p: f64) -> Result<f64> {
    let cp = c_p_const(p)?;
    if let Some(i) = increments.iter().position(|x| !(*x >= 0.0)) {
        return Err(invalid("increments", format!("entry {i} is negative or NaN")));
    }
    let mut sorted = increments.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut best = 0.0f64;
    let mut tail = 0.0;
    for (m, x) in sorted.iter().enumerate() {
        tail += x;
        best = best.max(((m + 1) as f64).powf(1.0 / p - 1.0) * tail);
    }
    Ok(cp.powf(1.0 / p) * best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeminormReport {
    pub value: f64,
    /// Number of pairs `k` attaining the maximum; absent for constant paths.
    pub argmax_k: Option<usize>,
    /// `δ*_k = M_k(p−1)/(kp)`; zero when `p = 1`, where the supremum is the limit δ → 0.
    pub argmax_delta: Option<f64>,
    pub p: f64,
}

/// Seminorm from an already computed pair profile.
pub fn seminorm_from_profile(profile: &TtvProfile, p: f64) -> Result<SeminormReport> {
    let cp = c_p_const(p)?;
    let mut best: Option<(usize, f64)> = None;
    for (i, &mk) in profile.values().iter().enumerate() {
        let k = (i + 1) as f64;
        let v = cp * mk.powf(p) / k.powf(p - 1.0);
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((i + 1, v));
        }
    }
    Ok(match best {
        None => SeminormReport {
            value: 0.0,
            argmax_k: None,
            argmax_delta: None,
            p,
        },
        Some((k, v)) => SeminormReport {
            value: v.powf(1.0 / p),
            argmax_k: Some(k),
            argmax_delta: Some(profile.values()[k - 1] * (p - 1.0) / (k as f64 * p)),
            p,
        },
    })
}

pub fn p_tv_seminorm<P: MetricPath + ?Sized>(path: &P, p: f64) -> Result<SeminormReport> {
    check_p(p)?;
    seminorm_from_profile(&ttv_profile(path), p)
}

/// `‖f(a)‖ + ‖f‖_{p-TV}`.
pub fn tv_p_norm(path: &crate::paths::SampledPath, p: f64) -> Result<f64> {
    let start = path.norm_kind().norm(path.value(0));
    Ok(start + p_tv_seminorm(path, p)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{gen_fixture, Fixture, SampledPath};
    use crate::variation::ttv;

    #[test]
    fn c_p_values() {
        assert_eq!(c_p_const(2.0).unwrap(), 0.25);
        assert_eq!(c_p_const(1.0).unwrap(), 1.0);
        assert!((c_p_const(3.0).unwrap() - 4.0 / 27.0).abs() < 1e-16);
        assert!(c_p_const(0.9).is_err());
        for i in 0..200 {
            let p = 1.0 + i as f64 * 0.05;
            let c = c_p_const(p).unwrap();
            assert!(c <= 1.0 && c >= 2f64.powf(-p) * (1.0 - 1e-15));
        }
    }

    #[test]
    fn single_increment_grid() {
        let (x, p) = (2.0, 1.5);
        let n = 1_000_000;
        let grid = (1..n).map(|i| x * i as f64 / n as f64).map(|d| d.powf(p - 1.0) * (x - d)).fold(0.0, f64::max);
        let exact = sup_delta_single(x, p).unwrap();
        assert!((grid - exact).abs() < 1e-9);
        assert_eq!(sup_delta_single(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(sup_delta_single(1.0, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn fixed_partition_examples() {
        let v = fixed_partition_seminorm(&[1.0, 2.0], 2.0).unwrap();
        assert!((v - 3.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(fixed_partition_seminorm(&[], 2.0).unwrap(), 0.0);
        let single = fixed_partition_seminorm(&[3.0], 1.7).unwrap();
        assert!((single - c_p_const(1.7).unwrap().powf(1.0 / 1.7) * 3.0).abs() < 1e-14);
        assert!(fixed_partition_seminorm(&[1.0, -0.1], 2.0).is_err());
    }

    #[test]
    fn step_split_values() {
        let f = gen_fixture(Fixture::StepSplit).unwrap();
        let r = p_tv_seminorm(&f, 2.0).unwrap();
        assert!((r.value.powi(2) - 9.0 / 8.0).abs() < 1e-14);
        assert_eq!(r.argmax_k, Some(2));
        assert_eq!(r.argmax_delta, Some(0.75));
        let left = p_tv_seminorm(&f.restrict(-1.0, 0.0).unwrap(), 2.0).unwrap().value;
        let right = p_tv_seminorm(&f.restrict(0.0, 1.0).unwrap(), 2.0).unwrap().value;
        assert!((left.powi(2) - 0.25).abs() < 1e-15);
        assert!((right.powi(2) - 1.0).abs() < 1e-15);
        assert!(r.value.powi(2) < left.powi(2) + right.powi(2));
        assert!((tv_p_norm(&f, 2.0).unwrap() - (9.0f64 / 8.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn circle3_and_trivial_paths() {
        let c = gen_fixture(Fixture::Circle3).unwrap();
        assert!((p_tv_seminorm(&c, 2.0).unwrap().value.powi(2) - 1.5).abs() < 1e-14);
        let constant = SampledPath::new(vec![0.0, 1.0], vec![vec![3.0, 4.0]; 2], Default::default()).unwrap();
        let r = p_tv_seminorm(&constant, 2.0).unwrap();
        assert_eq!((r.value, r.argmax_k, r.argmax_delta), (0.0, None, None));
        assert_eq!(tv_p_norm(&constant, 2.0).unwrap(), 5.0);
        let single = SampledPath::scalar(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(p_tv_seminorm(&single, 3.0).unwrap().value, 0.0);
        let jump = SampledPath::scalar(vec![0.0, 1.0], vec![0.0, 0.8]).unwrap();
        assert!((tv_p_norm(&jump, 2.0).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn p_one_is_total_variation() {
        let f = SampledPath::scalar(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 2.0, 1.0, 4.0]).unwrap();
        let r = p_tv_seminorm(&f, 1.0).unwrap();
        assert!((r.value - ttv(&f, 0.0).unwrap()).abs() < 1e-15);
        assert_eq!(r.argmax_delta, Some(0.0));
    }
}
