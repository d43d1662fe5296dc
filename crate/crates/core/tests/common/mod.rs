//! Random path generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tvkit::paths::{MetricPath, NormKind, OperatorPath, SampledPath};

pub const NORMS: [NormKind; 3] = [NormKind::Euclidean, NormKind::Supremum, NormKind::L1];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn any_norm(rng: &mut ChaCha8Rng) -> NormKind {
    NORMS[rng.random_range(0..3)]
}

/// Increasing times starting at `t0` with gaps in `[0.05, 1)`.
pub fn times(rng: &mut ChaCha8Rng, n: usize, t0: f64) -> Vec<f64> {
    let mut t = t0;
    (0..n)
        .map(|i| {
            if i > 0 {
                t += rng.random_range(0.05..1.0);
            }
            t
        })
        .collect()
}

/// Values in `[-2, 2]^d`, with repeated samples and occasional large jumps so
/// that flat stretches and outliers both show up.
pub fn values(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(n * d);
    for i in 0..n {
        let roll: f64 = rng.random();
        for k in 0..d {
            let v = if i > 0 && roll < 0.15 {
                out[(i - 1) * d + k]
            } else if roll > 0.95 {
                rng.random_range(-10.0..10.0)
            } else {
                rng.random_range(-2.0..2.0)
            };
            out.push(v);
        }
    }
    out
}

pub fn path(rng: &mut ChaCha8Rng, n: usize, d: usize, norm: NormKind) -> SampledPath {
    let t0 = rng.random_range(-1.0..1.0);
    let ts = times(rng, n, t0);
    let vs = values(rng, n, d);
    SampledPath::from_flat(ts, vs, d, norm).unwrap()
}

/// Random path with `n` in `lo..=hi`, `d ∈ {1, 3}` and any norm.
pub fn small_path(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> SampledPath {
    let n = rng.random_range(lo..=hi);
    let d = if rng.random_bool(0.5) { 1 } else { 3 };
    let norm = any_norm(rng);
    path(rng, n, d, norm)
}

fn grid_with_ends(rng: &mut ChaCha8Rng, interior: usize) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..interior).map(|_| rng.random_range(0.001..0.999)).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut out = vec![0.0];
    out.extend(ts);
    out.push(1.0);
    out
}

/// Step pair on `[0, 1]` with disjoint jump sets: `f` is `d × d` matrix valued
/// and does not move at `t = 1`, `g` is `R^d` valued.
pub fn step_pair(rng: &mut ChaCha8Rng) -> (OperatorPath, SampledPath) {
    loop {
        let d = rng.random_range(1..=2);
        let norm = any_norm(rng);
        let nf = rng.random_range(1..=12);
        let ng = rng.random_range(1..=12);
        let tf = grid_with_ends(rng, nf);
        let tg = grid_with_ends(rng, ng);
        let shared = tf[1..tf.len() - 1].iter().any(|t| tg.contains(t));
        if shared {
            continue;
        }
        let mut fv = values(rng, tf.len(), d * d);
        let m = tf.len();
        for k in 0..d * d {
            fv[(m - 1) * d * d + k] = fv[(m - 2) * d * d + k];
        }
        let gv = values(rng, tg.len(), d);
        let f = OperatorPath::from_flat(tf, fv, d, norm).unwrap();
        let g = SampledPath::from_flat(tg, gv, d, norm).unwrap();
        return (f, g);
    }
}

/// Union of the sample times of two paths.
pub fn union_times<A: MetricPath + ?Sized, B: MetricPath + ?Sized>(a: &A, b: &B) -> Vec<f64> {
    let mut t: Vec<f64> = a.times().iter().chain(b.times()).copied().collect();
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// `|a − b| ≤ tol·max(1, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

/// Sum over the best subsequence (of at least two samples) of `w(‖x_j − x_i‖)`
/// between consecutive members, by enumerating all `2^n` subsets.
pub fn brute_sup<P: MetricPath + ?Sized>(path: &P, w: impl Fn(f64) -> f64) -> f64 {
    let n = path.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << n) {
        let mut prev: Option<usize> = None;
        let mut s = 0.0;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                if let Some(j) = prev {
                    s += w(path.dist(j, i));
                }
                prev = Some(i);
            }
        }
        best = best.max(s);
    }
    best
}

/// `c_p = sup_{0<δ<1} δ^{p−1}(1 − δ)`, from the closed-form maximiser.
pub fn cp(p: f64) -> f64 {
    let d = (p - 1.0) / p;
    d.powf(p - 1.0) * (1.0 - d)
}
