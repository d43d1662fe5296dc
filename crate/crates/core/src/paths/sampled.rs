use crate::error::{invalid, Error, Result};

use super::norm::NormKind;

/// Anything that exposes a finite sequence of time-stamped points and a
/// distance between any two of them. All variation functionals are defined in
/// terms of this trait.
pub trait MetricPath: Sync {
    fn len(&self) -> usize;
    fn times(&self) -> &[f64];
    /// Distance between samples `i` and `j`.
    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Strictly increasing time stamps with `d`-dimensional values.
///
/// A sampled path denotes its right-continuous step completion on
/// `[times[0], times[n-1]]`: the value at `t` is the value of the last sample
/// at or before `t`. Every supremum over partitions of that step function is
/// attained on sample times, so the discrete functionals computed here are the
/// exact functionals of the step completion.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    data: Vec<f64>,
    dim: usize,
    norm: NormKind,
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::EmptyPath);
    }
    for (i, t) in times.iter().enumerate() {
        if !t.is_finite() {
            return Err(Error::NonFinite { index: i });
        }
        if i > 0 && *t <= times[i - 1] {
            return Err(Error::NonIncreasingTimes { index: i });
        }
    }
    Ok(())
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>, norm: NormKind) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        let dim = values.first().map(Vec::len).ok_or(Error::EmptyPath)?;
        let mut data = Vec::with_capacity(dim * values.len());
        for (i, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    index: i,
                    expected: dim,
                    found: v.len(),
                });
            }
            data.extend_from_slice(v);
        }
        Self::from_flat(times, data, dim, norm)
    }

    /// Builds a path from row-major flattened values (`dim` entries per sample).
    pub fn from_flat(times: Vec<f64>, data: Vec<f64>, dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        check_times(&times)?;
        if data.len() != times.len() * dim {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: data.len() / dim,
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: pos / dim });
        }
        Ok(Self {
            times,
            data,
            dim,
            norm,
        })
    }

    pub fn scalar(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::from_flat(times, values, 1, NormKind::Euclidean)
    }

    pub fn with_norm(mut self, norm: NormKind) -> Self {
        self.norm = norm;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn flat_values(&self) -> &[f64] {
        &self.data
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Index of the last sample at or before `t`, clamped to the first sample.
    pub fn index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// Value of the right-continuous step completion at `t`.
    pub fn step_at(&self, t: f64) -> &[f64] {
        self.value(self.index_at(t))
    }

    /// Value of the piecewise-linear completion at `t` (clamped outside the range).
    pub fn linear_at(&self, t: f64, out: &mut [f64]) {
        let i = self.index_at(t);
        if i + 1 >= self.len() || t <= self.times[i] {
            out.copy_from_slice(self.value(i));
            return;
        }
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = (t - t0) / (t1 - t0);
        let (a, b) = (self.value(i), self.value(i + 1));
        for k in 0..self.dim {
            out[k] = a[k] + w * (b[k] - a[k]);
        }
    }

    /// Norms of the one-step increments `‖v_i − v_{i-1}‖`, `i = 1..n`.
    pub fn increment_norms(&self) -> Vec<f64> {
        (1..self.len()).map(|i| self.dist(i - 1, i)).collect()
    }

    /// Sample times (after the first) at which the step completion jumps.
    pub fn jump_times(&self) -> Vec<f64> {
        (1..self.len())
            .filter(|&i| self.value(i) != self.value(i - 1))
            .map(|i| self.times[i])
            .collect()
    }

    /// Step completion restricted to `[c, d]`: the first sample is `(c, f(c))`,
    /// followed by every sample strictly inside `(c, d]`.
    pub fn restrict(&self, c: f64, d: f64) -> Result<Self> {
        if !(c <= d) || c < self.start() || d > self.end() {
            return Err(invalid("interval", format!("[{c}, {d}] is not inside the path range")));
        }
        let mut times = vec![c];
        let mut data = self.step_at(c).to_vec();
        for i in 0..self.len() {
            let t = self.times[i];
            if t > c && t <= d {
                times.push(t);
                data.extend_from_slice(self.value(i));
            }
        }
        Self::from_flat(times, data, self.dim, self.norm)
    }

    /// Sample-wise sum; both paths must share the time grid and dimension.
    pub fn add(&self, other: &SampledPath) -> Result<Self> {
        if self.times != other.times || self.dim != other.dim {
            return Err(invalid("other", "paths must share times and dimension"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self::from_flat(self.times.clone(), data, self.dim, self.norm)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self {
            times: self.times.clone(),
            data: self.data.iter().map(|x| alpha * x).collect(),
            dim: self.dim,
            norm: self.norm,
        }
    }

    /// Applies `g` to every coordinate of every value.
    pub fn map_coords(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        let data = self.data.iter().map(|&x| g(x)).collect();
        Self::from_flat(self.times.clone(), data, self.dim, self.norm)
    }

    /// Same values placed on a new time grid of equal length.
    pub fn retimed(&self, times: Vec<f64>) -> Result<Self> {
        Self::from_flat(times, self.data.clone(), self.dim, self.norm)
    }
}

impl MetricPath for SampledPath {
    fn len(&self) -> usize {
        self.times.len()
    }

    fn times(&self) -> &[f64] {
        &self.times
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.norm.dist(self.value(i), self.value(j))
    }
}
