//! Path representation, norms, fixtures and generators.

mod compose;
mod fixtures;
pub mod io;
mod norm;
mod operator;
mod sampled;
mod stable;

pub use compose::{compose, PointMap, TimeChange};
pub use fixtures::{gen_fixture, log_seq, Fixture};
pub use norm::NormKind;
pub use operator::{mat_vec_add, OperatorPath};
pub use sampled::{MetricPath, SampledPath};
pub use stable::{gen_alpha_stable, standard_symmetric_stable};

use crate::exec;

/// `max_{i<j} d(x_i, x_j)`; zero for a single sample.
pub fn oscillation<P: MetricPath + ?Sized>(path: &P) -> f64 {
    let n = path.len();
    exec::pick(n)
        .map(n, |i| ((i + 1)..n).map(|j| path.dist(i, j)).fold(0.0, f64::max))
        .into_iter()
        .fold(0.0, f64::max)
}
