use crate::error::{invalid, Error, Result};

use super::norm::NormKind;
use super::sampled::{check_times, MetricPath, SampledPath};

/// Path of `d × d` real matrices (row-major), measured in the operator norm
/// induced by `norm`. Step semantics as for [`SampledPath`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorPath {
    times: Vec<f64>,
    data: Vec<f64>,
    dim: usize,
    norm: NormKind,
}

impl OperatorPath {
    pub fn new(times: Vec<f64>, matrices: Vec<Vec<f64>>, dim: usize, norm: NormKind) -> Result<Self> {
        if times.len() != matrices.len() {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: matrices.len(),
            });
        }
        let mut data = Vec::with_capacity(dim * dim * matrices.len());
        for (i, m) in matrices.iter().enumerate() {
            if m.len() != dim * dim {
                return Err(Error::DimensionMismatch {
                    index: i,
                    expected: dim * dim,
                    found: m.len(),
                });
            }
            data.extend_from_slice(m);
        }
        Self::from_flat(times, data, dim, norm)
    }

    pub fn from_flat(times: Vec<f64>, data: Vec<f64>, dim: usize, norm: NormKind) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        check_times(&times)?;
        let block = dim * dim;
        if data.len() != times.len() * block {
            return Err(Error::LengthMismatch {
                times: times.len(),
                values: data.len() / block,
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index: pos / block });
        }
        Ok(Self {
            times,
            data,
            dim,
            norm,
        })
    }

    /// Reads a sampled path with `d²` coordinates as a path of `d × d` matrices.
    pub fn from_matrix_path(path: &SampledPath, dim: usize) -> Result<Self> {
        if path.dim() != dim * dim {
            return Err(invalid("dim", format!("path has {} coordinates, expected {}", path.dim(), dim * dim)));
        }
        Self::from_flat(path.times().to_vec(), path.flat_values().to_vec(), dim, path.norm_kind())
    }

    /// Scalar path `s(t)` viewed as the operator `s(t)·I` on `R^dim`.
    pub fn scalar_multiple_of_identity(path: &SampledPath, dim: usize) -> Result<Self> {
        if path.dim() != 1 {
            return Err(invalid("path", "expected a scalar path"));
        }
        let mut data = Vec::with_capacity(path.len() * dim * dim);
        for v in path.values() {
            for i in 0..dim {
                for j in 0..dim {
                    data.push(if i == j { v[0] } else { 0.0 });
                }
            }
        }
        Self::from_flat(path.times().to_vec(), data, dim, path.norm_kind())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn value(&self, i: usize) -> &[f64] {
        let b = self.dim * self.dim;
        &self.data[i * b..(i + 1) * b]
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn index_at(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    pub fn step_at(&self, t: f64) -> &[f64] {
        self.value(self.index_at(t))
    }

    pub fn linear_at(&self, t: f64, out: &mut [f64]) {
        let i = self.index_at(t);
        if i + 1 >= self.len() || t <= self.times[i] {
            out.copy_from_slice(self.value(i));
            return;
        }
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let w = (t - t0) / (t1 - t0);
        let (a, b) = (self.value(i), self.value(i + 1));
        for k in 0..a.len() {
            out[k] = a[k] + w * (b[k] - a[k]);
        }
    }

    pub fn jump_times(&self) -> Vec<f64> {
        (1..self.len())
            .filter(|&i| self.value(i) != self.value(i - 1))
            .map(|i| self.times[i])
            .collect()
    }

    /// Operator norm of a single matrix under this path's norm.
    pub fn op_norm(&self, m: &[f64]) -> f64 {
        self.norm.operator_norm(m, self.dim)
    }

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

    /// `½ · max_t ‖f(t) − f(a)‖`, the starting level of the integrand scale sequence.
    pub fn half_max_deviation_from_start(&self) -> f64 {
        0.5 * (0..self.len()).map(|i| self.dist(0, i)).fold(0.0, f64::max)
    }
}

impl MetricPath for OperatorPath {
    fn len(&self) -> usize {
        self.times.len()
    }

    fn times(&self) -> &[f64] {
        &self.times
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.norm.operator_dist(self.value(i), self.value(j), self.dim)
    }
}

/// Matrix–vector product `out = m · v` for a row-major `d × d` matrix.
pub fn mat_vec_add(m: &[f64], v: &[f64], scale: f64, out: &mut [f64]) {
    let d = v.len();
    for i in 0..d {
        let row = &m[i * d..(i + 1) * d];
        out[i] += scale * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    }
}
