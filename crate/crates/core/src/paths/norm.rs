use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Norm on `R^d`. Operator-valued paths use the induced operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Euclidean,
    #[serde(rename = "sup")]
    Supremum,
    L1,
}

impl NormKind {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormKind::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Supremum => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
        }
    }

    /// `‖a − b‖` without allocating.
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diffs = a.iter().zip(b).map(|(x, y)| x - y);
        match self {
            NormKind::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            NormKind::Supremum => diffs.fold(0.0, |m, d| m.max(d.abs())),
            NormKind::L1 => diffs.map(f64::abs).sum(),
        }
    }

    /// Operator norm of the row-major `d × d` matrix `m` induced by this norm.
    ///
    /// Supremum and l1 have closed forms (max row sum and max column sum).
    /// The euclidean case is the spectral norm, computed by power iteration on
    /// `AᵀA` from every basis vector so that no start is orthogonal to the top
    /// singular direction.
    pub fn operator_norm(self, m: &[f64], d: usize) -> f64 {
        debug_assert_eq!(m.len(), d * d);
        match self {
            NormKind::Supremum => (0..d)
                .map(|i| m[i * d..(i + 1) * d].iter().map(|x| x.abs()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::L1 => (0..d)
                .map(|j| (0..d).map(|i| m[i * d + j].abs()).sum::<f64>())
                .fold(0.0, f64::max),
            NormKind::Euclidean => spectral_norm(m, d),
        }
    }

    pub fn operator_dist(self, a: &[f64], b: &[f64], d: usize) -> f64 {
        if d == 1 {
            return (a[0] - b[0]).abs();
        }
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.operator_norm(&diff, d)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Euclidean => "euclidean",
            NormKind::Supremum => "sup",
            NormKind::L1 => "l1",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" | "l2" => Ok(NormKind::Euclidean),
            "sup" | "supremum" | "linf" => Ok(NormKind::Supremum),
            "l1" => Ok(NormKind::L1),
            other => Err(Error::Parse(format!("unknown norm `{other}`"))),
        }
    }
}

const SPECTRAL_RTOL: f64 = 1e-12;
const SPECTRAL_MAX_ITERS: usize = 10_000;

fn spectral_norm(m: &[f64], d: usize) -> f64 {
    if d == 1 {
        return m[0].abs();
    }
    // Gram matrix G = AᵀA.
    let mut gram = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let s: f64 = (0..d).map(|k| m[k * d + i] * m[k * d + j]).sum();
            gram[i * d + j] = s;
            gram[j * d + i] = s;
        }
    }
    let frob2: f64 = m.iter().map(|x| x * x).sum();
    if frob2 == 0.0 {
        return 0.0;
    }
    let mut best = 0.0f64;
    let mut x = vec![0.0; d];
    let mut y = vec![0.0; d];
    for start in 0..d {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[start] = 1.0;
        let mut lambda = 0.0f64;
        for _ in 0..SPECTRAL_MAX_ITERS {
            for i in 0..d {
                y[i] = (0..d).map(|j| gram[i * d + j] * x[j]).sum();
            }
            let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if ny == 0.0 {
                break;
            }
            // Rayleigh quotient xᵀGx with ‖x‖ = 1.
            let next: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            for i in 0..d {
                x[i] = y[i] / ny;
            }
            let done = (next - lambda).abs() <= SPECTRAL_RTOL * next.abs();
            lambda = next;
            if done {
                break;
            }
        }
        best = best.max(lambda);
    }
    best.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vector_norms() {
        let v = [3.0, -4.0];
        assert_eq!(NormKind::Euclidean.norm(&v), 5.0);
        assert_eq!(NormKind::Supremum.norm(&v), 4.0);
        assert_eq!(NormKind::L1.norm(&v), 7.0);
    }

    #[test]
    fn operator_norms_closed_forms() {
        // [[1, -2], [3, 4]]
        let m = [1.0, -2.0, 3.0, 4.0];
        assert_eq!(NormKind::Supremum.operator_norm(&m, 2), 7.0);
        assert_eq!(NormKind::L1.operator_norm(&m, 2), 6.0);
        let s = nalgebra::DMatrix::from_row_slice(2, 2, &m).singular_values().max();
        assert_relative_eq!(NormKind::Euclidean.operator_norm(&m, 2), s, max_relative = 1e-10);
    }

    #[test]
    fn spectral_norm_of_diagonal_with_hidden_top_direction() {
        let m = [0.5, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0];
        assert_relative_eq!(NormKind::Euclidean.operator_norm(&m, 3), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn parse_roundtrip() {
        for n in [NormKind::Euclidean, NormKind::Supremum, NormKind::L1] {
            assert_eq!(n.as_str().parse::<NormKind>().unwrap(), n);
        }
        assert!("l7".parse::<NormKind>().is_err());
    }
}
