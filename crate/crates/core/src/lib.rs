//! Truncated variation, p-variation and Riemann–Stieltjes integration for
//! sampled paths in normed spaces.
//!
//! Parameter checks are written `!(x > 0.0)` on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cli;
pub mod error;
pub mod exec;
pub mod integrate;
pub mod paths;
pub mod seminorm;
pub mod variation;

pub use error::{Error, Result};
