//! Symmetric α-stable random walks.
//!
//! Increments are drawn with the Chambers–Mallows–Stuck method in the
//! `S(α, β = 0, σ, μ = 0)` parametrization, whose characteristic function is
//! `exp(−σ^α |u|^α)`. For `α = 2` this is the centered Gaussian with variance
//! `2σ²`. The random source is `ChaCha8Rng::seed_from_u64(seed)`, so paths are
//! bit-reproducible across runs and platforms.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

use super::sampled::SampledPath;

/// One standard (`σ = 1`) symmetric α-stable variate.
pub fn standard_symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    // V uniform on (−π/2, π/2), W standard exponential; both kept off the boundary.
    let u: f64 = rng.random::<f64>();
    let v = (u - 0.5) * std::f64::consts::PI;
    let v = v.clamp(-FRAC_PI_2 + 1e-15, FRAC_PI_2 - 1e-15);
    let w = -(1.0 - rng.random::<f64>()).ln();
    let w = w.max(f64::MIN_POSITIVE);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let a = (alpha * v).sin() / v.cos().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha);
    a * b
}

/// Scalar path on a uniform grid of `n` points over `[0, horizon]`, starting at
/// 0, with i.i.d. increments `scale · h^{1/α} · S` where `h = horizon/(n−1)`.
pub fn gen_alpha_stable(n: usize, alpha: f64, scale: f64, seed: u64, horizon: f64) -> Result<SampledPath> {
    if n < 2 {
        return Err(invalid("n", "need at least 2 points"));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(invalid("alpha", "stability index must lie in (0, 2]"));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(invalid("scale", "must be positive"));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid("horizon", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = horizon / (n - 1) as f64;
    let factor = scale * step.powf(1.0 / alpha);
    let times: Vec<f64> = (0..n).map(|i| i as f64 * step).collect();
    let mut values = Vec::with_capacity(n);
    let mut x = 0.0;
    values.push(x);
    for _ in 1..n {
        x += factor * standard_symmetric_stable(alpha, &mut rng);
        values.push(x);
    }
    SampledPath::scalar(times, values)
}
