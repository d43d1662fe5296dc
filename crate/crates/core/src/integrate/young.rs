//! Young-type inequalities checked on concrete integrals.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::paths::{mat_vec_add, oscillation, OperatorPath, SampledPath};
use crate::seminorm::p_tv_seminorm;
use crate::variation::p_variation;

use super::bounds::{check_exponents, choose_sequences, d_constant, ly_constant, young_bound_s};
use super::riemann::{rs_integral, RsOptions};
use super::signal::{exact_integral, indefinite_integral, Integrand, Integrator};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyReport {
    /// `‖∫f dg − f(a)[g(b) − g(a)]‖`.
    pub lhs: f64,
    /// `C_{p,q}·‖f‖_{p-var}^{p−p/q}·‖f‖_osc^{1+p/q−p}·‖g‖_{q-var}`.
    pub rhs: f64,
    pub ratio: f64,
    #[serde(rename = "C_pq")]
    pub c_pq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub value: Vec<f64>,
    /// `exact` for sampled pairs, `refinement` otherwise.
    pub method: &'static str,
    pub refinement_levels: u32,
    pub cauchy_gap: f64,
    #[serde(rename = "bound_S")]
    pub bound_s: Option<f64>,
    pub ly: Option<LyReport>,
}

/// `lhs/rhs` with `0/0 = 0`.
pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// The integral alone: exact when both sides are sampled, by refinement otherwise.
pub fn integrate(f: &Integrand, g: &Integrator, opts: &RsOptions) -> Result<IntegralReport> {
    let (value, method, levels, gap) = if f.sampled().is_some() && g.sampled().is_some() {
        (exact_integral(f, g)?, "exact", 0, 0.0)
    } else {
        let r = rs_integral(f, g, opts)?;
        (r.value, "refinement", r.levels, r.cauchy_gap)
    };
    Ok(IntegralReport {
        value,
        method,
        refinement_levels: levels,
        cauchy_gap: gap,
        bound_s: None,
        ly: None,
    })
}

/// `‖∫f dg − f(a)[g(b) − g(a)]‖` for an already computed integral.
pub fn integral_deviation(f: &Integrand, g: &Integrator, value: &[f64]) -> f64 {
    let (a, b) = g.domain();
    let d = g.dim();
    let mut fa = vec![0.0; d * d];
    let mut ga = vec![0.0; d];
    let mut gb = vec![0.0; d];
    f.eval(a, &mut fa);
    g.eval(a, &mut ga);
    g.eval(b, &mut gb);
    let dg: Vec<f64> = gb.iter().zip(&ga).map(|(x, y)| x - y).collect();
    let mut base = vec![0.0; d];
    mat_vec_add(&fa, &dg, 1.0, &mut base);
    g.norm_kind().dist(value, &base)
}

/// Integral plus the truncated-variation bound `S` (power sequences) and the
/// improved Loève–Young comparison. Both `f` and `g` must come from sampled
/// paths; variations of either completion equal those of the samples.
pub fn improved_ly_check(f: &Integrand, g: &Integrator, p: f64, q: f64, opts: &RsOptions) -> Result<IntegralReport> {
    check_exponents(p, q)?;
    let (fp, gp) = match (f.sampled(), g.sampled()) {
        (Some(fp), Some(gp)) => (fp, gp),
        _ => return Err(invalid("f, g", "the variation bounds need sampled paths")),
    };
    let mut report = integrate(f, g, opts)?;
    let osc = oscillation(fp);
    // A constant integrand integrates to exactly f(a)[g(b) − g(a)]; skip the
    // rounding noise of the sum.
    let lhs = if osc == 0.0 {
        0.0
    } else {
        integral_deviation(f, g, &report.value)
    };
    let c_pq = ly_constant(p, q, opts.tol)?;
    let vp = p_variation(fp, p)?;
    let vq = p_variation(gp, q)?;
    let rhs = c_pq * vp.powf(1.0 - 1.0 / q) * osc.powf(1.0 + p / q - p) * vq.powf(1.0 / q);
    let seqs = choose_sequences(p, q, fp, gp)?;
    let s = young_bound_s(fp, gp, &seqs, opts.tol)?;
    report.bound_s = Some(s.value + s.tail_bound);
    report.ly = Some(LyReport {
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        c_pq,
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrregularityReport {
    /// `‖∫_a^· [f(s) − f(a)] dg(s)‖_{q-TV}`.
    pub lhs: f64,
    /// `D_{p,q}·‖f‖_{p-TV}^{p−p/q}·‖f‖_osc^{1+p/q−p}·‖g‖_{q-TV}`.
    pub rhs: f64,
    pub ratio: f64,
    #[serde(rename = "D_pq")]
    pub d_pq: f64,
}

/// Compares the q-TV seminorm of the indefinite integral with its bound,
/// under step semantics.
pub fn irregularity_check(f: &OperatorPath, g: &SampledPath, p: f64, q: f64, tol: f64) -> Result<IrregularityReport> {
    check_exponents(p, q)?;
    let integral = indefinite_integral(f, g)?;
    let lhs = p_tv_seminorm(&integral, q)?.value;
    let d_pq = d_constant(p, q, tol)?;
    let fp = p_tv_seminorm(f, p)?.value;
    let gq = p_tv_seminorm(g, q)?.value;
    let rhs = d_pq * fp.powf(p - p / q) * oscillation(f).powf(1.0 + p / q - p) * gq;
    Ok(IrregularityReport {
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        d_pq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::NormKind;
    use crate::seminorm::c_p_const;

    fn op(times: Vec<f64>, vals: Vec<f64>) -> OperatorPath {
        OperatorPath::scalar_multiple_of_identity(&SampledPath::scalar(times, vals).unwrap(), 1).unwrap()
    }

    #[test]
    fn constant_integrand_gives_zero() {
        let f = op(vec![0.0, 1.0], vec![2.0, 2.0]);
        let g = SampledPath::scalar(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, -1.0]).unwrap();
        let r = improved_ly_check(&Integrand::Step(&f), &Integrator::Step(&g), 1.5, 1.5, &RsOptions::default()).unwrap();
        let ly = r.ly.unwrap();
        assert_eq!((ly.lhs, ly.ratio), (0.0, 0.0));
        assert_eq!(r.bound_s, Some(0.0));
        let irr = irregularity_check(&f, &g, 1.5, 1.5, 1e-9).unwrap();
        assert_eq!((irr.lhs, irr.ratio), (0.0, 0.0));
    }

    #[test]
    fn single_jump_irregularity() {
        let f = op(vec![0.0, 0.25, 1.0], vec![0.0, 1.5, -0.5]);
        let g = SampledPath::scalar(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 2.0]).unwrap();
        let r = irregularity_check(&f, &g, 1.5, 1.5, 1e-9).unwrap();
        let expected = c_p_const(1.5).unwrap().powf(1.0 / 1.5) * 3.0;
        assert!((r.lhs - expected).abs() < 1e-12);
        assert!(r.ratio <= 1.0);
    }

    #[test]
    fn ly_on_a_small_pair() {
        let f = op(vec![0.0, 0.3, 0.7, 1.0], vec![0.0, 1.0, -1.0, -1.0]);
        let g = SampledPath::new(vec![0.0, 0.5, 0.9, 1.0], vec![vec![0.0], vec![1.0], vec![0.0], vec![3.0]], NormKind::Euclidean)
            .unwrap();
        let r = improved_ly_check(&Integrand::Step(&f), &Integrator::Step(&g), 1.5, 1.5, &RsOptions::default()).unwrap();
        assert_eq!(r.value, vec![1.0 * 1.0 + (-1.0) * (-1.0) - 3.0]);
        let ly = r.ly.unwrap();
        assert_eq!(ly.lhs, 1.0);
        assert!(ly.lhs <= r.bound_s.unwrap());
        assert!(ly.ratio <= 1.0);
    }
}
