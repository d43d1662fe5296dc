//! Riemann–Stieltjes sums and dyadic refinement.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::paths::mat_vec_add;

use super::signal::{check_pair, min_jump_separation, Integrand, Integrator};

/// Where the tag `ξ_i` sits in its cell `[t_{i−1}, t_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TagRule {
    #[default]
    Left,
    Mid,
    Right,
}

impl TagRule {
    fn tag(self, lo: f64, hi: f64) -> f64 {
        match self {
            TagRule::Left => lo,
            TagRule::Mid => 0.5 * (lo + hi),
            TagRule::Right => hi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsOptions {
    /// Stop once successive levels differ by at most this much.
    pub tol: f64,
    /// Deepest level tried; level `L` uses `2^L` cells.
    pub max_levels: u32,
    pub tags: TagRule,
    pub exec: Execution,
}

impl Default for RsOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_levels: 24,
            tags: TagRule::Left,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    pub value: Vec<f64>,
    pub levels: u32,
    pub cauchy_gap: f64,
}

/// `Σ f(ξ_i)·[g(t_i) − g(t_{i−1})]` over an explicit partition and tags.
pub fn rs_sum(f: &Integrand, g: &Integrator, partition: &[f64], tags: &[f64]) -> Result<Vec<f64>> {
    let (a, b) = check_pair(f, g)?;
    let slack = 1e-12 * (b - a).abs().max(1.0);
    if partition.len() < 2
        || partition.windows(2).any(|w| !(w[1] > w[0]))
        || partition[0] < a - slack
        || partition[partition.len() - 1] > b + slack
    {
        return Err(Error::BadPartition);
    }
    if tags.len() + 1 != partition.len() {
        return Err(invalid("tags", "need exactly one tag per partition cell"));
    }
    for (i, &xi) in tags.iter().enumerate() {
        if !(xi >= partition[i] && xi <= partition[i + 1]) {
            return Err(Error::TagOutsideCell { index: i });
        }
    }
    let d = g.dim();
    let mut total = vec![0.0; d];
    let mut fm = vec![0.0; d * d];
    let mut g0 = vec![0.0; d];
    let mut g1 = vec![0.0; d];
    g.eval(partition[0], &mut g0);
    for (i, &xi) in tags.iter().enumerate() {
        g.eval(partition[i + 1], &mut g1);
        f.eval(xi, &mut fm);
        let dg: Vec<f64> = g1.iter().zip(&g0).map(|(x, y)| x - y).collect();
        mat_vec_add(&fm, &dg, 1.0, &mut total);
        std::mem::swap(&mut g0, &mut g1);
    }
    Ok(total)
}

const CHUNK: usize = 4096;

/// Sum over the uniform partition with `2^level` cells. Cells are grouped in
/// fixed chunks whose partial sums are added in index order, so the result
/// does not depend on the execution mode.
fn dyadic_sum(f: &Integrand, g: &Integrator, a: f64, b: f64, level: u32, opts: &RsOptions) -> Vec<f64> {
    let cells = 1usize << level;
    let h = (b - a) / cells as f64;
    let d = g.dim();
    let point = |i: usize| if i == cells { b } else { a + h * i as f64 };
    let chunks = cells.div_ceil(CHUNK);
    let exec = if chunks > 1 { opts.exec } else { Execution::Sequential };
    let partials = exec.map(chunks, |c| {
        let mut acc = vec![0.0; d];
        let mut fm = vec![0.0; d * d];
        let mut g0 = vec![0.0; d];
        let mut g1 = vec![0.0; d];
        let mut dg = vec![0.0; d];
        let lo = c * CHUNK;
        let hi = ((c + 1) * CHUNK).min(cells);
        g.eval(point(lo), &mut g0);
        for i in lo..hi {
            let (t0, t1) = (point(i), point(i + 1));
            g.eval(t1, &mut g1);
            f.eval(opts.tags.tag(t0, t1), &mut fm);
            for k in 0..d {
                dg[k] = g1[k] - g0[k];
            }
            mat_vec_add(&fm, &dg, 1.0, &mut acc);
            std::mem::swap(&mut g0, &mut g1);
        }
        acc
    });
    let mut total = vec![0.0; d];
    for p in partials {
        for k in 0..d {
            total[k] += p[k];
        }
    }
    total
}

/// Refines dyadically until two consecutive pairs of successive levels
/// differ by at most `tol` (in the integrator's norm). The first level compared is deep enough that
/// every cell holds at most one jump of either function, so step completions
/// are integrated exactly once refinement stops.
pub fn rs_integral(f: &Integrand, g: &Integrator, opts: &RsOptions) -> Result<Refinement> {
    let (a, b) = check_pair(f, g)?;
    if !(opts.tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let min_level = match min_jump_separation(f, g) {
        Some(sep) if sep > 0.0 => ((b - a) / sep).log2().ceil().max(0.0) as u32 + 1,
        _ => 0,
    }
    .max(2);
    let norm = g.norm_kind();
    let mut prev = dyadic_sum(f, g, a, b, 1, opts);
    let mut gap = f64::INFINITY;
    let mut last_gap = f64::INFINITY;
    for level in 2..=opts.max_levels {
        let cur = dyadic_sum(f, g, a, b, level, opts);
        gap = norm.dist(&cur, &prev);
        // Two consecutive small gaps: a jump at a non-dyadic time can make two
        // successive levels agree exactly while both are still off.
        if level >= min_level && gap <= opts.tol && last_gap <= opts.tol {
            return Ok(Refinement {
                value: cur,
                levels: level,
                cauchy_gap: gap,
            });
        }
        prev = cur;
        last_gap = gap;
    }
    Err(Error::NoConvergence {
        levels: opts.max_levels,
        gap,
    })
}

/// Both sides of the summation-by-parts identity
/// `Σ [F_i − F_0]·[G_i − G_{i−1}] = Σ [F_i − F_{i−1}]·[G_n − G_{i−1}]`,
/// where `F_0 = f(c)` and `F_i = f(ξ_i)` are `d × d` matrices and
/// `G_i = g(t_i)` are vectors, `i = 0..=n`.
pub fn summation_by_parts(fvals: &[Vec<f64>], gvals: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    if fvals.len() != gvals.len() || fvals.is_empty() {
        return Err(invalid("fvals", "need one matrix per partition point"));
    }
    let d = gvals[0].len();
    if gvals.iter().any(|g| g.len() != d) || fvals.iter().any(|f| f.len() != d * d) {
        return Err(invalid("dim", "inconsistent dimensions"));
    }
    let n = fvals.len() - 1;
    let diff = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>();
    let mut lhs = vec![0.0; d];
    let mut rhs = vec![0.0; d];
    for i in 1..=n {
        mat_vec_add(&diff(&fvals[i], &fvals[0]), &diff(&gvals[i], &gvals[i - 1]), 1.0, &mut lhs);
        mat_vec_add(&diff(&fvals[i], &fvals[i - 1]), &diff(&gvals[n], &gvals[i - 1]), 1.0, &mut rhs);
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::signal::{step_integral, Analytic};
    use crate::paths::{NormKind, OperatorPath, SampledPath};

    fn identity_t() -> Analytic {
        Analytic::new(0.0, 1.0, 1, |t, out| out[0] = t)
    }

    #[test]
    fn hand_sum_and_telescoping() {
        let f = Integrand::Analytic { dim: 1, func: identity_t() };
        let g = Integrator::Analytic { norm: NormKind::Euclidean, func: identity_t() };
        let part = [0.0, 0.25, 0.5, 0.75, 1.0];
        let s = rs_sum(&f, &g, &part, &part[..4]).unwrap();
        assert_eq!(s, vec![0.375]);
        let eye = Integrand::Analytic {
            dim: 1,
            func: Analytic::new(0.0, 1.0, 1, |_, out| out[0] = 1.0),
        };
        let s = rs_sum(&eye, &g, &[0.0, 0.1, 0.7, 1.0], &[0.05, 0.7, 0.9]).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partition_and_tag_errors() {
        let f = Integrand::Analytic { dim: 1, func: identity_t() };
        let g = Integrator::Analytic { norm: NormKind::Euclidean, func: identity_t() };
        assert_eq!(rs_sum(&f, &g, &[0.0, 0.5, 0.4, 1.0], &[0.0, 0.4, 0.5]), Err(Error::BadPartition));
        assert_eq!(rs_sum(&f, &g, &[0.0, 0.5, 1.0], &[0.6, 0.7]), Err(Error::TagOutsideCell { index: 0 }));
        assert!(rs_sum(&f, &g, &[0.0, 0.5, 1.5], &[0.0, 0.6]).is_err());
    }

    #[test]
    fn smooth_refinement() {
        let f = Integrand::Analytic { dim: 1, func: identity_t() };
        let g = Integrator::Analytic { norm: NormKind::Euclidean, func: identity_t() };
        let r = rs_integral(&f, &g, &RsOptions { tol: 1e-6, ..Default::default() }).unwrap();
        assert!((r.value[0] - 0.5).abs() < 2e-6);
        assert!(r.cauchy_gap <= 1e-6);
    }

    #[test]
    fn step_integrand_against_identity() {
        let fp = OperatorPath::scalar_multiple_of_identity(
            &SampledPath::scalar(vec![0.0, 1.0 / 3.0, 1.0], vec![0.0, 1.0, 1.0]).unwrap(),
            1,
        )
        .unwrap();
        let g = Integrator::Analytic { norm: NormKind::Euclidean, func: identity_t() };
        let r = rs_integral(&Integrand::Step(&fp), &g, &RsOptions { tol: 1e-6, ..Default::default() }).unwrap();
        assert!((r.value[0] - 2.0 / 3.0).abs() < 2e-6);
    }

    #[test]
    fn step_pair_matches_exact_sum() {
        let fp = OperatorPath::scalar_multiple_of_identity(
            &SampledPath::scalar(vec![0.0, 0.3, 0.61, 1.0], vec![1.0, -2.0, 0.5, 3.0]).unwrap(),
            1,
        )
        .unwrap();
        let gp = SampledPath::scalar(vec![0.0, 0.2, 0.6, 0.9, 1.0], vec![0.0, 1.0, 4.0, 2.0, 2.0]).unwrap();
        let exact = step_integral(&fp, &gp).unwrap();
        let opts = RsOptions { tol: 1e-12, ..Default::default() };
        let seq = rs_integral(&Integrand::Step(&fp), &Integrator::Step(&gp), &RsOptions { exec: Execution::Sequential, ..opts }).unwrap();
        let par = rs_integral(&Integrand::Step(&fp), &Integrator::Step(&gp), &opts).unwrap();
        assert!((seq.value[0] - exact[0]).abs() < 1e-12);
        assert_eq!(seq, par);
    }

    #[test]
    fn no_convergence_is_reported() {
        let f = Integrand::Analytic { dim: 1, func: identity_t() };
        let g = Integrator::Analytic { norm: NormKind::Euclidean, func: identity_t() };
        let r = rs_integral(&f, &g, &RsOptions { tol: 1e-12, max_levels: 6, ..Default::default() });
        assert!(matches!(r, Err(Error::NoConvergence { levels: 6, .. })));
    }

    #[test]
    fn summation_by_parts_small() {
        let f = vec![vec![1.0], vec![2.0], vec![-1.0]];
        let g = vec![vec![0.0], vec![3.0], vec![1.0]];
        let (l, r) = summation_by_parts(&f, &g).unwrap();
        assert_eq!(l, vec![3.0 + 4.0]);
        assert_eq!(l, r);
    }
}
