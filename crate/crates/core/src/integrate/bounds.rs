//! Truncated-variation bounds on Riemann–Stieltjes sums and the constants of
//! the Young-type inequalities.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::paths::{MetricPath, OperatorPath, SampledPath};
use crate::variation::{ttv_profile, TtvProfile};

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 10_000;

/// Scale sequences `η_k` (integrand side) and `θ_k` (integrator side).
///
/// `η_{−1}` is not stored: it is always `½·sup_t ‖f(t) − f(a)‖` of the
/// integrand the pair is used with.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequencePair {
    /// Finite nonincreasing lists `η_0..η_{L−1}` and `θ_0..θ_{L−1}`, read as the
    /// limit of positive sequences whose later entries shrink to zero.
    Explicit { eta: Vec<f64>, theta: Vec<f64> },
    /// `η_{k−1} = β·3^{1−r^k}`, `θ_k = γ·3^{−r^k·α/(q−1)}` with
    /// `α = (√((q−1)(p−1)) + 1)/2` and `r = α²/((q−1)(p−1))`.
    Power { p: f64, q: f64, alpha: f64, r: f64, beta: f64, gamma: f64 },
    /// Either function is constant; every bound is zero.
    Degenerate,
}

fn check_nonincreasing_positive(xs: &[f64], name: &'static str) -> Result<()> {
    if xs.iter().any(|x| !(*x > 0.0) || !x.is_finite()) || xs.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::BadSequence(name));
    }
    Ok(())
}

impl SequencePair {
    pub fn explicit(eta: Vec<f64>, theta: Vec<f64>) -> Result<Self> {
        if eta.len() != theta.len() || eta.is_empty() {
            return Err(invalid("eta, theta", "lists must be nonempty and of equal length"));
        }
        check_nonincreasing_positive(&eta, "eta")?;
        check_nonincreasing_positive(&theta, "theta")?;
        Ok(SequencePair::Explicit { eta, theta })
    }

    /// `η_k` for `k ≥ 0`.
    pub fn eta(&self, k: usize) -> f64 {
        match self {
            SequencePair::Explicit { eta, .. } => eta.get(k).copied().unwrap_or(0.0),
            SequencePair::Power { r, beta, .. } => beta * 3f64.powf(1.0 - r.powf(k as f64 + 1.0)),
            SequencePair::Degenerate => 0.0,
        }
    }

    pub fn theta(&self, k: usize) -> f64 {
        match self {
            SequencePair::Explicit { theta, .. } => theta.get(k).copied().unwrap_or(0.0),
            SequencePair::Power { q, alpha, r, gamma, .. } => {
                gamma * 3f64.powf(-r.powf(k as f64) * alpha / (q - 1.0))
            }
            SequencePair::Degenerate => 0.0,
        }
    }
}

pub(crate) fn check_exponents(p: f64, q: f64) -> Result<()> {
    if !(p > 1.0 && q > 1.0 && p.is_finite() && q.is_finite()) || 1.0 / p + 1.0 / q <= 1.0 {
        return Err(Error::ExponentConstraint { p, q });
    }
    Ok(())
}

fn alpha_r(p: f64, q: f64) -> (f64, f64) {
    let pq = (q - 1.0) * (p - 1.0);
    let alpha = (pq.sqrt() + 1.0) / 2.0;
    (alpha, alpha * alpha / pq)
}

/// Half the largest distance from the starting value.
pub fn half_sup_deviation<P: MetricPath + ?Sized>(path: &P) -> f64 {
    0.5 * (0..path.len()).map(|i| path.dist(0, i)).fold(0.0, f64::max)
}

/// The power-type sequences balancing the two sums of the bound against
/// `V^p(f)` and `V^q(g)`.
pub fn choose_sequences(p: f64, q: f64, f: &OperatorPath, g: &SampledPath) -> Result<SequencePair> {
    check_exponents(p, q)?;
    let beta = half_sup_deviation(f);
    let vp = crate::variation::p_variation(f, p)?;
    let vq = crate::variation::p_variation(g, q)?;
    if beta == 0.0 || vp == 0.0 || vq == 0.0 {
        return Ok(SequencePair::Degenerate);
    }
    let (alpha, r) = alpha_r(p, q);
    let gamma = (vq / vp).powf(1.0 / q) * beta.powf(p / q);
    Ok(SequencePair::Power {
        p,
        q,
        alpha,
        r,
        beta,
        gamma,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundS {
    /// Partial sum of both series.
    pub value: f64,
    /// Certified bound on the omitted tail; `value + tail_bound ≥ S`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `S = 4Σ_k 3^k η_{k−1}·TTV(g, θ_k/4) + 4Σ_k 3^k θ_k·TTV(f, η_k/4)`.
///
/// For [`SequencePair::Power`] the tail after `K` terms is bounded with
/// `TTV ≤ TV` and the geometric bound on `3^k η_{k−1}` and `3^k θ_k`, whose
/// successive ratios are nonincreasing; summation stops once that bound is at
/// most `tail_tol`. For explicit lists the sum is finite and includes the
/// limiting term `4·3^L·η_{L−1}·TV(g)`.
pub fn young_bound_s<F, G>(f: &F, g: &G, seqs: &SequencePair, tail_tol: f64) -> Result<BoundS>
where
    F: MetricPath + ?Sized,
    G: MetricPath + ?Sized,
{
    if !(tail_tol > 0.0) {
        return Err(invalid("tail_tol", "must be positive"));
    }
    let eta_m1 = half_sup_deviation(f);
    if matches!(seqs, SequencePair::Degenerate) || eta_m1 == 0.0 {
        return Ok(BoundS {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        });
    }
    let pf = ttv_profile(f);
    let pg = ttv_profile(g);
    bound_from_profiles(&pf, &pg, eta_m1, seqs, tail_tol)
}

pub(crate) fn bound_from_profiles(
    pf: &TtvProfile,
    pg: &TtvProfile,
    eta_m1: f64,
    seqs: &SequencePair,
    tail_tol: f64,
) -> Result<BoundS> {
    let eta_prev = |k: usize| if k == 0 { eta_m1 } else { seqs.eta(k - 1) };
    let term = |k: usize| {
        let w = 4.0 * 3f64.powi(k as i32);
        w * eta_prev(k) * pg.ttv(seqs.theta(k) / 4.0) + w * seqs.theta(k) * pf.ttv(seqs.eta(k) / 4.0)
    };
    match seqs {
        SequencePair::Degenerate => Ok(BoundS {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
        }),
        SequencePair::Explicit { eta, .. } => {
            let l = eta.len();
            let mut value: f64 = (0..l).map(term).sum();
            value += 4.0 * 3f64.powi(l as i32) * eta[l - 1] * pg.total_variation();
            Ok(BoundS {
                value,
                tail_bound: 0.0,
                terms: l + 1,
            })
        }
        SequencePair::Power { .. } => {
            let (tvf, tvg) = (pf.total_variation(), pg.total_variation());
            let u = |k: usize| 3f64.powi(k as i32) * eta_prev(k);
            let v = |k: usize| 3f64.powi(k as i32) * seqs.theta(k);
            let geometric_tail = |x: &dyn Fn(usize) -> f64, k: usize| {
                let (a, b) = (x(k + 1), x(k + 2));
                if a == 0.0 {
                    0.0
                } else if b < a {
                    a / (1.0 - b / a)
                } else {
                    f64::INFINITY
                }
            };
            let mut value = 0.0;
            for k in 0..MAX_TERMS {
                value += term(k);
                let tail = 4.0 * tvg * geometric_tail(&u, k) + 4.0 * tvf * geometric_tail(&v, k);
                if tail <= tail_tol {
                    return Ok(BoundS {
                        value,
                        tail_bound: tail,
                        terms: k + 1,
                    });
                }
            }
            Err(Error::SeriesNotConverged { terms: MAX_TERMS })
        }
    }
}

/// Right-hand side of the single-partition estimate on `[c, d]`:
/// `4Σ_{k≤r} 3^k δ_{k−1}·TTV(g, ε_k/4) + 4Σ_{k≤r} 3^k ε_k·TTV(f, δ_k/4) + n·δ_r·ε_r`,
/// with `δ_{−1} = ½·sup_{[c,d]}‖f − f(c)‖`, `r + 1` the list length and `n`
/// the number of partition cells.
pub fn lemma2_bound(f: &OperatorPath, g: &SampledPath, partition: &[f64], deltas: &[f64], epsilons: &[f64]) -> Result<f64> {
    if deltas.len() != epsilons.len() || deltas.is_empty() {
        return Err(invalid("deltas, epsilons", "lists must be nonempty and of equal length"));
    }
    check_nonincreasing_positive(deltas, "deltas")?;
    check_nonincreasing_positive(epsilons, "epsilons")?;
    if partition.len() < 2 || partition.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::BadPartition);
    }
    let (c, d) = (partition[0], partition[partition.len() - 1]);
    let fr = f.restrict(c, d)?;
    let gr = g.restrict(c, d)?;
    let pf = ttv_profile(&fr);
    let pg = ttv_profile(&gr);
    let delta_m1 = half_sup_deviation(&fr);
    let r = deltas.len() - 1;
    let mut bound = 0.0;
    for k in 0..=r {
        let w = 4.0 * 3f64.powi(k as i32);
        let dprev = if k == 0 { delta_m1 } else { deltas[k - 1] };
        bound += w * dprev * pg.ttv(epsilons[k] / 4.0) + w * epsilons[k] * pf.ttv(deltas[k] / 4.0);
    }
    let n = (partition.len() - 1) as f64;
    Ok(bound + n * deltas[r] * epsilons[r])
}

/// Sums a positive series whose successive ratios are eventually
/// nonincreasing. Stops at the first `k` where the term is at most half its
/// predecessor and at most `threshold`; the omitted tail is then below the
/// last term included.
fn sum_series(term: impl Fn(usize) -> f64, threshold: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let t = term(k);
        sum += t;
        if t == 0.0 || (t <= 0.5 * prev && t <= threshold) {
            return Ok(sum);
        }
        prev = t;
    }
    Err(Error::SeriesNotConverged { terms: MAX_TERMS })
}

fn series_a(p: f64, q: f64, threshold: f64) -> Result<f64> {
    let (alpha, r) = alpha_r(p, q);
    sum_series(|k| 3f64.powf(k as f64 + 1.0 - (1.0 - alpha) * r.powf(k as f64)), threshold)
}

fn series_b(p: f64, q: f64, threshold: f64) -> Result<f64> {
    let (alpha, r) = alpha_r(p, q);
    sum_series(
        |k| 3f64.powf(k as f64 + 1.0 - p - alpha * (1.0 - alpha) * r.powf(k as f64) / (q - 1.0)),
        threshold,
    )
}

/// `C_{p,q} = 4^q·A + 4^p·B`, each series truncated so the total error is at most `tol`.
pub fn ly_constant(p: f64, q: f64, tol: f64) -> Result<f64> {
    check_exponents(p, q)?;
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let (wa, wb) = (4f64.powf(q), 4f64.powf(p));
    let a = series_a(p, q, tol / (2.0 * wa))?;
    let b = series_b(p, q, tol / (2.0 * wb))?;
    Ok(wa * a + wb * b)
}

/// `D_{p,q} = D̃^{1/q}` with `D̃ = 4^q·A·(2·4^p·B)^{q−1}`. A coarse first
/// pass sizes the truncation so that the error in `D` is at most `tol`.
pub fn d_constant(p: f64, q: f64, tol: f64) -> Result<f64> {
    check_exponents(p, q)?;
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let eval = |a: f64, b: f64| (4f64.powf(q) * a * (2.0 * 4f64.powf(p) * b).powf(q - 1.0)).powf(1.0 / q);
    let (a0, b0) = (series_a(p, q, 1e-6)?, series_b(p, q, 1e-6)?);
    let d0 = eval(a0, b0);
    // dD/D = (dA/A + (q−1)·dB/B)/q; split the budget evenly, with a safety factor of 2.
    let rel = q * tol / (4.0 * d0);
    let a = series_a(p, q, rel * a0)?;
    let b = series_b(p, q, rel * b0 / (q - 1.0))?;
    Ok(eval(a, b))
}
