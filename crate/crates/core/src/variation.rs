//! Truncated, total, p- and φ-variation of sampled paths.
//!
//! The truncated variation at threshold `c` is
//! `sup Σ max(‖f(t_i) − f(t_{i−1})‖ − c, 0)` over all finite subsequences of
//! sample times. Instead of solving one optimisation per `c`, we compute the
//! pair profile `M_k`: the largest total length of `k` disjoint, ordered
//! sample pairs `s_1 < t_1 ≤ s_2 < t_2 ≤ …`. Increments at or below `c`
//! contribute nothing to the truncated sum, so
//!
//! ```text
//! TTV(c) = max(0, max_k (M_k − k·c))
//! ```
//!
//! for every `c ≥ 0`, and one profile answers all thresholds. The identity is
//! checked against [`brute`] enumeration in the test suites.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::exec::{self, Execution};
use crate::paths::MetricPath;

/// `M_1 ≤ M_2 ≤ … ≤ M_K`, `K = n − 1`. Empty for single-sample paths.
#[derive(Debug, Clone, PartialEq)]
pub struct TtvProfile {
    m: Vec<f64>,
}

impl TtvProfile {
    /// `M_k` for `k = 1..=K` (index `k − 1`).
    pub fn values(&self) -> &[f64] {
        &self.m
    }

    pub fn max_pairs(&self) -> usize {
        self.m.len()
    }

    /// `M_1`, the oscillation.
    pub fn oscillation(&self) -> f64 {
        self.m.first().copied().unwrap_or(0.0)
    }

    /// `M_K`, the total variation.
    pub fn total_variation(&self) -> f64 {
        self.m.last().copied().unwrap_or(0.0)
    }

    /// Truncated variation at `c ≥ 0`.
    pub fn ttv(&self, c: f64) -> f64 {
        self.m
            .iter()
            .enumerate()
            .map(|(i, mk)| mk - (i + 1) as f64 * c)
            .fold(0.0, f64::max)
    }
}

fn distance_matrix<P: MetricPath + ?Sized>(path: &P, exec: Execution) -> Vec<f64> {
    let n = path.len();
    let rows = exec.map(n, |i| (0..n).map(|j| if i == j { 0.0 } else { path.dist(i, j) }).collect::<Vec<_>>());
    rows.concat()
}

pub fn ttv_profile<P: MetricPath + ?Sized>(path: &P) -> TtvProfile {
    ttv_profile_with(path, exec::pick(path.len()))
}

/// Pair profile by dynamic programming over (pairs used, last index):
/// `A_k(j) = max(A_k(j−1), max_{i<j} A_{k−1}(i) + d(i, j))` with `A_0 ≡ 0`,
/// `M_k = A_k(n−1)`. `O(n²·K)` time; the inner maximisation over `i` is
/// independent across `j` and runs in parallel under [`Execution::Parallel`].
pub fn ttv_profile_with<P: MetricPath + ?Sized>(path: &P, exec: Execution) -> TtvProfile {
    let n = path.len();
    if n < 2 {
        return TtvProfile { m: Vec::new() };
    }
    let dist = distance_matrix(path, exec);
    let mut prev = vec![0.0f64; n];
    let mut m = Vec::with_capacity(n - 1);
    for k in 1..n {
        let prev_ref = &prev;
        let dist_ref = &dist;
        // k pairs need at least k + 1 samples, so the last endpoint is ≥ k and
        // the previous level is only meaningful from index k − 1 on.
        let best_ending = exec.map(n, |j| {
            if j < k {
                return f64::NEG_INFINITY;
            }
            let row = &dist_ref[j * n..j * n + j];
            (k - 1..j).map(|i| prev_ref[i] + row[i]).fold(f64::NEG_INFINITY, f64::max)
        });
        let mut cur = vec![f64::NEG_INFINITY; n];
        let mut run = f64::NEG_INFINITY;
        for j in 0..n {
            run = run.max(best_ending[j]);
            cur[j] = run;
        }
        m.push(cur[n - 1]);
        prev = cur;
    }
    TtvProfile { m }
}

/// Exact discrete truncated variation at threshold `c ≥ 0`.
pub fn ttv<P: MetricPath + ?Sized>(path: &P, c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(invalid("c", "truncation level must be nonnegative"));
    }
    Ok(ttv_profile(path).ttv(c))
}

/// `Σ ‖f(t_i) − f(t_{i−1})‖` over consecutive samples.
pub fn total_variation<P: MetricPath + ?Sized>(path: &P) -> f64 {
    (1..path.len()).map(|i| path.dist(i - 1, i)).sum()
}

/// Supremum over subsequences of `Σ w(‖Δ‖)`: `best(j) = max_{i<j} best(i) + w(d(i, j))`.
fn weighted_variation<P, W>(path: &P, weight: W) -> f64
where
    P: MetricPath + ?Sized,
    W: Fn(f64) -> f64,
{
    let n = path.len();
    let mut best = vec![0.0f64; n];
    let mut overall = 0.0f64;
    for j in 1..n {
        let b = (0..j).map(|i| best[i] + weight(path.dist(i, j))).fold(0.0, f64::max);
        best[j] = b;
        overall = overall.max(b);
    }
    overall
}

/// `V^p`, the p-th power sum (not its root), for `p ≥ 1`.
pub fn p_variation<P: MetricPath + ?Sized>(path: &P, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(invalid("p", "p-variation needs p >= 1"));
    }
    Ok(weighted_variation(path, |d| d.powf(p)))
}

pub fn phi_variation<P: MetricPath + ?Sized>(path: &P, phi: &PhiSpec) -> Result<f64> {
    phi.validate()?;
    Ok(weighted_variation(path, |d| phi.value(d)))
}

/// Which of the two logarithmic weight families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    /// `x^p / (ln(1 + 1/x))^γ`
    Log,
    /// `x^p / (ln(1 + 1/x) · (ln ln(e + 1/x))^γ)`
    LogLog,
}

/// Weight function for φ-variation.
#[derive(Clone)]
pub enum PhiSpec {
    Family { kind: PhiKind, p: f64, gamma: f64 },
    /// Caller-supplied weight. `admissible` records the caller's claim that the
    /// weight satisfies the growth conditions; it is carried, not verified.
    Custom {
        func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        admissible: bool,
    },
}

impl std::fmt::Debug for PhiSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PhiSpec::Family { kind, p, gamma } => write!(f, "Family({kind:?}, p={p}, gamma={gamma})"),
            PhiSpec::Custom { admissible, .. } => write!(f, "Custom(admissible={admissible})"),
        }
    }
}

const MONOTONE_GRID: usize = 1000;

impl PhiSpec {
    pub fn family(kind: PhiKind, p: f64, gamma: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(invalid("p", "family weights need p > 1"));
        }
        if !(gamma > 1.0) {
            return Err(invalid("gamma", "family weights need gamma > 1"));
        }
        Ok(PhiSpec::Family { kind, p, gamma })
    }

    pub fn custom(func: impl Fn(f64) -> f64 + Send + Sync + 'static, admissible: bool) -> Self {
        PhiSpec::Custom {
            func: Arc::new(func),
            admissible,
        }
    }

    pub fn is_admissible(&self) -> bool {
        match self {
            PhiSpec::Family { .. } => true,
            PhiSpec::Custom { admissible, .. } => *admissible,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            PhiSpec::Family { kind, p, gamma } => {
                if x <= 0.0 {
                    return 0.0;
                }
                let inv = 1.0 / x;
                let log = inv.ln_1p();
                match kind {
                    PhiKind::Log => x.powf(*p) / log.powf(*gamma),
                    PhiKind::LogLog => {
                        // ln(e + 1/x) = 1 + ln(1 + 1/(e·x))
                        let loglog = (inv / std::f64::consts::E).ln_1p().ln_1p();
                        x.powf(*p) / (log * loglog.powf(*gamma))
                    }
                }
            }
            PhiSpec::Custom { func, .. } => func(x),
        }
    }

    /// Checks `φ(0) = 0` and spot-checks monotonicity on a log-spaced grid over
    /// `[1e-6, 1e3]`.
    pub fn validate(&self) -> Result<()> {
        let at_zero = self.value(0.0);
        if at_zero != 0.0 {
            return Err(Error::PhiNotZeroAtOrigin(at_zero));
        }
        let mut last = 0.0f64;
        for i in 0..MONOTONE_GRID {
            let x = 10f64.powf(-6.0 + 9.0 * i as f64 / (MONOTONE_GRID - 1) as f64);
            let v = self.value(x);
            if v.is_nan() || v < last - 1e-12 * last.abs() {
                return Err(Error::PhiNotMonotone(x));
            }
            last = v;
        }
        Ok(())
    }
}

/// `φ(x)` for `x ≥ 0`.
pub fn phi_value(phi: &PhiSpec, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid("x", "phi is defined for x >= 0"));
    }
    Ok(phi.value(x))
}

/// Literal enumeration over all `2^n` subsequences of sample indices.
///
/// Exponential; only intended as an independent reference for small paths.
pub mod brute {
    use super::*;

    pub const MAX_SAMPLES: usize = 14;

    fn check<P: MetricPath + ?Sized>(path: &P) -> Result<()> {
        if path.len() > MAX_SAMPLES {
            return Err(Error::PathTooLarge {
                len: path.len(),
                max: MAX_SAMPLES,
            });
        }
        Ok(())
    }

    /// Calls `visit` with the consecutive-pair distances of every subsequence
    /// with at least two indices.
    fn for_each_subsequence<P: MetricPath + ?Sized>(path: &P, mut visit: impl FnMut(&[f64])) {
        let n = path.len();
        let mut gaps = Vec::with_capacity(n);
        for mask in 0u32..(1u32 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            gaps.clear();
            let mut prev: Option<usize> = None;
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    if let Some(p) = prev {
                        gaps.push(path.dist(p, i));
                    }
                    prev = Some(i);
                }
            }
            visit(&gaps);
        }
    }

    pub fn sup_weighted<P: MetricPath + ?Sized>(path: &P, weight: impl Fn(f64) -> f64) -> Result<f64> {
        check(path)?;
        let mut best = 0.0f64;
        for_each_subsequence(path, |gaps| {
            best = best.max(gaps.iter().map(|&d| weight(d)).sum());
        });
        Ok(best)
    }

    pub fn ttv_brute<P: MetricPath + ?Sized>(path: &P, c: f64) -> Result<f64> {
        if !(c >= 0.0) {
            return Err(invalid("c", "truncation level must be nonnegative"));
        }
        sup_weighted(path, |d| (d - c).max(0.0))
    }

    pub fn p_variation_brute<P: MetricPath + ?Sized>(path: &P, p: f64) -> Result<f64> {
        sup_weighted(path, |d| d.powf(p))
    }

    pub fn phi_variation_brute<P: MetricPath + ?Sized>(path: &P, phi: &PhiSpec) -> Result<f64> {
        sup_weighted(path, |d| phi.value(d))
    }

    /// `M_k` as the best sum of the `k` largest consecutive gaps of any subsequence.
    pub fn profile_brute<P: MetricPath + ?Sized>(path: &P) -> Result<Vec<f64>> {
        check(path)?;
        let k_max = path.len().saturating_sub(1);
        let mut m = vec![0.0f64; k_max];
        for_each_subsequence(path, |gaps| {
            let mut sorted = gaps.to_vec();
            sorted.sort_by(|a, b| b.total_cmp(a));
            let mut acc = 0.0;
            for (k, mk) in m.iter_mut().enumerate() {
                if let Some(g) = sorted.get(k) {
                    acc += g;
                }
                *mk = mk.max(acc);
            }
        });
        Ok(m)
    }
}
