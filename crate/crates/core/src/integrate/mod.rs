//! Riemann–Stieltjes integration of operator-valued integrands against
//! vector-valued integrators, with truncated-variation error bounds.

mod bounds;
mod riemann;
mod signal;
mod young;

pub use bounds::{
    choose_sequences, d_constant, half_sup_deviation, lemma2_bound, ly_constant, young_bound_s, BoundS, SequencePair,
    MAX_TERMS,
};
pub use riemann::{rs_integral, rs_sum, summation_by_parts, Refinement, RsOptions, TagRule};
pub use signal::{
    exact_integral, indefinite_integral, linear_integral, step_integral, Analytic, Integrand, Integrator,
};
pub use young::{
    improved_ly_check, integral_deviation, integrate, irregularity_check, IntegralReport, IrregularityReport, LyReport,
};
