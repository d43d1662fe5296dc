//! Integrands and integrators: sampled paths under a step or piecewise-linear
//! completion, or closed-form functions.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::paths::{MetricPath, NormKind, OperatorPath, SampledPath};

/// Closed-form function on `[a, b]` writing `len` coordinates. `jumps` lists
/// known discontinuities; it drives the common-jump check and the starting
/// refinement depth.
pub type AnalyticFn = Arc<dyn Fn(f64, &mut [f64]) + Send + Sync>;

#[derive(Clone)]
pub struct Analytic {
    pub a: f64,
    pub b: f64,
    pub len: usize,
    pub func: AnalyticFn,
    pub jumps: Vec<f64>,
}

impl Analytic {
    pub fn new(a: f64, b: f64, len: usize, func: impl Fn(f64, &mut [f64]) + Send + Sync + 'static) -> Self {
        Self {
            a,
            b,
            len,
            func: Arc::new(func),
            jumps: Vec::new(),
        }
    }

    pub fn with_jumps(mut self, jumps: Vec<f64>) -> Self {
        self.jumps = jumps;
        self
    }
}

impl std::fmt::Debug for Analytic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Analytic([{}, {}], len={}, jumps={:?})", self.a, self.b, self.len, self.jumps)
    }
}

/// Operator-valued integrand `f`.
#[derive(Debug, Clone)]
pub enum Integrand<'a> {
    Step(&'a OperatorPath),
    Linear(&'a OperatorPath),
    /// Row-major `dim × dim` matrix function; `len` must equal `dim²`.
    Analytic { dim: usize, func: Analytic },
}

/// Vector-valued integrator `g`.
#[derive(Debug, Clone)]
pub enum Integrator<'a> {
    Step(&'a SampledPath),
    Linear(&'a SampledPath),
    Analytic { norm: NormKind, func: Analytic },
}

impl Integrand<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Integrand::Step(p) | Integrand::Linear(p) => p.dim(),
            Integrand::Analytic { dim, .. } => *dim,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Integrand::Step(p) | Integrand::Linear(p) => (p.start(), p.end()),
            Integrand::Analytic { func, .. } => (func.a, func.b),
        }
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        match self {
            Integrand::Step(p) => out.copy_from_slice(p.step_at(t)),
            Integrand::Linear(p) => p.linear_at(t, out),
            Integrand::Analytic { func, .. } => (func.func)(t, out),
        }
    }

    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Integrand::Step(p) => p.jump_times(),
            Integrand::Linear(_) => Vec::new(),
            Integrand::Analytic { func, .. } => func.jumps.clone(),
        }
    }

    pub fn sampled(&self) -> Option<&OperatorPath> {
        match self {
            Integrand::Step(p) | Integrand::Linear(p) => Some(p),
            Integrand::Analytic { .. } => None,
        }
    }

    fn is_linear(&self) -> bool {
        matches!(self, Integrand::Linear(_))
    }
}

impl Integrator<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Integrator::Step(p) | Integrator::Linear(p) => p.dim(),
            Integrator::Analytic { func, .. } => func.len,
        }
    }

    pub fn norm_kind(&self) -> NormKind {
        match self {
            Integrator::Step(p) | Integrator::Linear(p) => p.norm_kind(),
            Integrator::Analytic { norm, .. } => *norm,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        match self {
            Integrator::Step(p) | Integrator::Linear(p) => (p.start(), p.end()),
            Integrator::Analytic { func, .. } => (func.a, func.b),
        }
    }

    pub fn eval(&self, t: f64, out: &mut [f64]) {
        match self {
            Integrator::Step(p) => out.copy_from_slice(p.step_at(t)),
            Integrator::Linear(p) => p.linear_at(t, out),
            Integrator::Analytic { func, .. } => (func.func)(t, out),
        }
    }

    pub fn jumps(&self) -> Vec<f64> {
        match self {
            Integrator::Step(p) => p.jump_times(),
            Integrator::Linear(_) => Vec::new(),
            Integrator::Analytic { func, .. } => func.jumps.clone(),
        }
    }

    pub fn sampled(&self) -> Option<&SampledPath> {
        match self {
            Integrator::Step(p) | Integrator::Linear(p) => Some(p),
            Integrator::Analytic { .. } => None,
        }
    }

    fn is_linear(&self) -> bool {
        matches!(self, Integrator::Linear(_))
    }
}

/// Checks dimensions, matching domains and disjoint jump sets.
pub(crate) fn check_pair(f: &Integrand, g: &Integrator) -> Result<(f64, f64)> {
    if let Integrand::Analytic { dim, func } = f {
        if func.len != dim * dim {
            return Err(invalid("f", "analytic integrand must write dim² coordinates"));
        }
    }
    if f.dim() != g.dim() {
        return Err(invalid(
            "dim",
            format!("integrand acts on R^{} but integrator is in R^{}", f.dim(), g.dim()),
        ));
    }
    let (fa, fb) = f.domain();
    let (ga, gb) = g.domain();
    let slack = 1e-12 * (gb - ga).abs().max(1.0);
    if (fa - ga).abs() > slack || (fb - gb).abs() > slack {
        return Err(Error::DomainMismatch);
    }
    if !(ga < gb) {
        return Err(invalid("domain", "integration interval must have positive length"));
    }
    let fj = f.jumps();
    for s in g.jumps() {
        if fj.binary_search_by(|x| x.total_cmp(&s)).is_ok() {
            return Err(Error::CommonJump(s));
        }
    }
    Ok((ga, gb))
}

/// Smallest distance between a jump of `f` and a jump of `g`, if both jump.
pub(crate) fn min_jump_separation(f: &Integrand, g: &Integrator) -> Option<f64> {
    let fj = f.jumps();
    let gj = g.jumps();
    if fj.is_empty() || gj.is_empty() {
        return None;
    }
    let mut best = f64::INFINITY;
    for s in gj {
        let i = fj.partition_point(|&x| x < s);
        if i < fj.len() {
            best = best.min(fj[i] - s);
        }
        if i > 0 {
            best = best.min(s - fj[i - 1]);
        }
    }
    Some(best)
}

/// Exact `∫ f dg` when both sides come from sampled paths.
///
/// On each cell `[u, v]` of the merged time grid `g` either jumps only at `v`
/// (step completion, contributing `f(v)·Δg`) or is linear. Against a linear
/// `g`, a step `f` is constant on `[u, v)` and a linear `f` integrates by the
/// trapezoid rule, which is exact for a product of two linear pieces.
pub fn exact_integral(f: &Integrand, g: &Integrator) -> Result<Vec<f64>> {
    check_pair(f, g)?;
    let (fp, gp) = match (f.sampled(), g.sampled()) {
        (Some(fp), Some(gp)) => (fp, gp),
        _ => return Err(invalid("f, g", "exact integration needs sampled paths")),
    };
    let d = gp.dim();
    let mut grid: Vec<f64> = fp.times().iter().chain(gp.times()).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut total = vec![0.0; d];
    let mut fu = vec![0.0; d * d];
    let mut fv = vec![0.0; d * d];
    let mut gu = vec![0.0; d];
    let mut gv = vec![0.0; d];
    let mut dg = vec![0.0; d];
    g.eval(grid[0], &mut gu);
    f.eval(grid[0], &mut fu);
    for &v in &grid[1..] {
        g.eval(v, &mut gv);
        f.eval(v, &mut fv);
        for k in 0..d {
            dg[k] = gv[k] - gu[k];
        }
        match (f.is_linear(), g.is_linear()) {
            (_, false) => crate::paths::mat_vec_add(&fv, &dg, 1.0, &mut total),
            (false, true) => crate::paths::mat_vec_add(&fu, &dg, 1.0, &mut total),
            (true, true) => {
                crate::paths::mat_vec_add(&fu, &dg, 0.5, &mut total);
                crate::paths::mat_vec_add(&fv, &dg, 0.5, &mut total);
            }
        }
        std::mem::swap(&mut fu, &mut fv);
        std::mem::swap(&mut gu, &mut gv);
    }
    Ok(total)
}

/// `Σ_{g jumps s} f(s)·Δg(s)` for step completions with disjoint jumps.
pub fn step_integral(f: &OperatorPath, g: &SampledPath) -> Result<Vec<f64>> {
    exact_integral(&Integrand::Step(f), &Integrator::Step(g))
}

/// Exact integral of piecewise-linear completions.
pub fn linear_integral(f: &OperatorPath, g: &SampledPath) -> Result<Vec<f64>> {
    exact_integral(&Integrand::Linear(f), &Integrator::Linear(g))
}

/// `I(t) = Σ_{g jumps s ≤ t} [f(s) − f(a)]·Δg(s)` under step semantics,
/// sampled at `a` and at every jump time of `g`.
pub fn indefinite_integral(f: &OperatorPath, g: &SampledPath) -> Result<SampledPath> {
    let (a, _) = check_pair(&Integrand::Step(f), &Integrator::Step(g))?;
    let d = g.dim();
    let fa = f.value(0);
    let mut times = vec![a];
    let mut data = vec![0.0; d];
    let mut acc = vec![0.0; d];
    let mut diff = vec![0.0; d * d];
    let mut dg = vec![0.0; d];
    for i in 1..g.len() {
        let (prev, cur) = (g.value(i - 1), g.value(i));
        if prev == cur {
            continue;
        }
        let s = g.times()[i];
        for (k, x) in f.step_at(s).iter().enumerate() {
            diff[k] = x - fa[k];
        }
        for k in 0..d {
            dg[k] = cur[k] - prev[k];
        }
        crate::paths::mat_vec_add(&diff, &dg, 1.0, &mut acc);
        times.push(s);
        data.extend_from_slice(&acc);
    }
    SampledPath::from_flat(times, data, d, g.norm_kind())
}
