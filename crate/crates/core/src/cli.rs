//! Command-line front end.
//!
//! Every subcommand reads one or two paths (from files, a named fixture or a
//! seeded generator), runs one library routine and prints a report. JSON is
//! the default; `--format csv` flattens reports into a header plus one row per
//! trial. [`run`] never touches the process state, so it is testable in-process.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::approx::{greedy_skeleton, linear_approx, sandwich, step_approx, Approximant};
use crate::error::{invalid, Error, Result};
use crate::exec::{derive_seed, run_trials, Execution};
use crate::integrate::{
    choose_sequences, improved_ly_check, integrate, irregularity_check, rs_integral, young_bound_s, IntegralReport,
    Integrand, Integrator, RsOptions, TagRule,
};
use crate::paths::{gen_alpha_stable, gen_fixture, io, Fixture, MetricPath, NormKind, OperatorPath, SampledPath};
use crate::seminorm::{p_tv_seminorm, tv_p_norm};
use crate::variation::{p_variation, phi_variation, ttv_profile, PhiKind, PhiSpec};

/// Environment variable capping the refinement depth.
pub const MAX_LEVELS_ENV: &str = "TVKIT_MAX_LEVELS";

#[derive(Debug, Parser)]
#[command(
    name = "tvkit",
    version,
    about = "Truncated variation, p-TV seminorms, BV approximants and Young integrals for sampled paths",
    after_help = "Paths are right-continuous step functions of their samples unless a command says otherwise. \
Times and values are dimensionless. Set TVKIT_MAX_LEVELS to cap refinement depth (default 24)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Truncated variation TTV(f, c) = sup Σ max(‖Δf‖ − c, 0).
    Ttv {
        #[command(flatten)]
        src: Source,
        /// Truncation level c ≥ 0, in the units of the path values.
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        out: Output,
    },
    /// p-variation V^p = sup Σ‖Δf‖^p (not raised to 1/p).
    Pvar {
        #[command(flatten)]
        src: Source,
        /// Exponent p ≥ 1.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// φ-variation for the logarithmic weight families.
    Phivar {
        #[command(flatten)]
        src: Source,
        /// Weight family: log is x^p/ln(1+1/x)^γ, loglog is x^p/(ln(1+1/x)·ln ln(e+1/x)^γ).
        #[arg(long, value_enum, default_value = "log")]
        phi_kind: PhiKindArg,
        /// Power p > 1 of the weight.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Logarithmic exponent γ > 1.
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[command(flatten)]
        out: Output,
    },
    /// p-TV seminorm (sup_δ δ^{p−1} TTV(f, δ))^{1/p} and the norm |f(a)| + seminorm.
    Seminorm {
        #[command(flatten)]
        src: Source,
        /// Exponent p ≥ 1.
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Greedy BV approximant within c/2 (step) or c (linear) of the path.
    ///
    /// JSON output is the bound report with the approximant embedded. With
    /// --format csv the approximant is written as a path CSV; if --out is also
    /// given, the CSV goes to the file and the JSON report to stdout.
    Approx {
        #[command(flatten)]
        src: Source,
        /// Accuracy c > 0.
        #[arg(long)]
        c: f64,
        /// Multipliers λ > 1 for the upper bound min_λ λ·TTV(f, (λ−1)c/(2λ)).
        #[arg(long, value_delimiter = ',', default_value = "1.5,2,3,10")]
        lambda: Vec<f64>,
        /// Approximant shape; auto means linear for generated paths, step otherwise.
        #[arg(long, value_enum, default_value = "auto")]
        completion: Completion,
        /// Largest increment into a skeleton time that the linear approximant interpolates.
        #[arg(long, default_value_t = 0.0)]
        eps_cont: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Riemann–Stieltjes integral ∫f dg of two paths.
    ///
    /// f is scalar (used as f·I) or has d² columns (a row-major d×d matrix);
    /// g has d columns. Pass f and g as two --input files or use --gen.
    Integrate {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        int: IntegralArgs,
        /// Also report the truncated-variation bound S; needs --q.
        #[arg(long)]
        p: Option<f64>,
        /// Exponent for g, used with --p.
        #[arg(long)]
        q: Option<f64>,
        /// Use dyadic refinement instead of the exact union-grid sum.
        #[arg(long)]
        refine: bool,
        /// Tag rule for refinement sums.
        #[arg(long, value_enum, default_value = "left")]
        tags: TagArg,
        #[command(flatten)]
        out: Output,
    },
    /// Integral with the truncated-variation bound S and the improved Loève–Young comparison.
    LyCheck {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        int: IntegralArgs,
        /// Exponent for f, with 1/p + 1/q > 1.
        #[arg(long)]
        p: f64,
        /// Exponent for g.
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        out: Output,
    },
    /// q-TV seminorm of ∫(f − f(a)) dg against its bound, under step semantics.
    Irregularity {
        #[command(flatten)]
        src: Source,
        /// Exponent for f, with 1/p + 1/q > 1.
        #[arg(long)]
        p: f64,
        /// Exponent for g.
        #[arg(long)]
        q: f64,
        /// Tolerance for the constant D_{p,q}.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Emit a fixture or generated path (the f path of trial 0 for --gen).
    Gen {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Path file: CSV `time,v1,...,vd` or JSON `{"times","values","norm"}`. Repeat for f then g.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Named fixture: circle3, stepSplit or logSeq.
    #[arg(long, conflicts_with_all = ["input", "gen"])]
    fixture: Option<String>,
    /// Exponent p of the logSeq fixture.
    #[arg(long, default_value_t = 2.0)]
    seq_p: f64,
    /// Number of points: largest index for logSeq, grid size for --gen.
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Generator name; alpha-stable is a symmetric α-stable random walk on [0, horizon].
    #[arg(long, value_enum, conflicts_with = "input")]
    gen: Option<GenName>,
    /// Stability index α in (0, 2].
    #[arg(long, default_value_t = 1.8)]
    alpha: f64,
    /// Scale σ of the stable increments over unit time.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Time horizon of generated paths.
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Base seed; required with --gen. Trial i uses derive_seed(seed, i).
    #[arg(long)]
    seed: Option<u64>,
    /// Independent trials (needs --gen); reports are ordered by trial index.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Norm on R^d: euclidean, sup or l1. Overrides the norm stored in JSON input.
    #[arg(long)]
    norm: Option<String>,
}

#[derive(Debug, Args)]
struct IntegralArgs {
    /// Completion of sampled paths; auto means linear for generated paths, step otherwise.
    #[arg(long, value_enum, default_value = "auto")]
    completion: Completion,
    /// Tolerance for refinement and for the series constants.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PhiKindArg {
    Log,
    Loglog,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Completion {
    Step,
    Linear,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TagArg {
    Left,
    Mid,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenName {
    AlphaStable,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(msg: &str) -> Self {
        let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("error").trim();
        let line = line.strip_prefix("error: ").unwrap_or(line);
        Self {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {line}\n"),
        }
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.render().to_string()),
                _ => Outcome::fail(&e.render().to_string()),
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(e) => Outcome::fail(&e.to_string()),
    }
}

fn max_levels() -> Result<u32> {
    match std::env::var(MAX_LEVELS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&l| (1..=40).contains(&l))
            .ok_or_else(|| invalid("TVKIT_MAX_LEVELS", format!("`{s}` is not an integer in 1..=40"))),
        Err(_) => Ok(24),
    }
}

/// Where the paths of a run come from.
enum Paths {
    Given(Vec<SampledPath>),
    Generated { seed: u64 },
}

impl Source {
    fn norm(&self) -> Result<Option<NormKind>> {
        self.norm.as_deref().map(NormKind::from_str).transpose()
    }

    fn resolve(&self) -> Result<Paths> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        let norm = self.norm()?;
        if self.gen.is_some() {
            let seed = self.seed.ok_or_else(|| invalid("seed", "--gen needs an explicit --seed"))?;
            return Ok(Paths::Generated { seed });
        }
        if self.trials > 1 {
            return Err(invalid("trials", "ensembles need a generator (--gen)"));
        }
        if let Some(name) = &self.fixture {
            let fixture = match Fixture::from_str(name)? {
                Fixture::LogSeq { .. } => Fixture::LogSeq { p: self.seq_p, n: self.n },
                other => other,
            };
            let path = gen_fixture(fixture)?;
            return Ok(Paths::Given(vec![match norm {
                Some(n) => path.with_norm(n),
                None => path,
            }]));
        }
        if self.input.is_empty() {
            return Err(invalid("input", "give --input, --fixture or --gen"));
        }
        let paths = self.input.iter().map(|f| io::read_path(f, norm)).collect::<Result<Vec<_>>>()?;
        Ok(Paths::Given(paths))
    }

    /// The `k`-th generated path of the trial with seed `trial_seed`.
    fn generate(&self, trial_seed: u64, k: u64) -> Result<SampledPath> {
        let p = gen_alpha_stable(self.n, self.alpha, self.scale, derive_seed(trial_seed, k), self.horizon)?;
        Ok(p.with_norm(self.norm()?.unwrap_or_default()))
    }

    fn is_generated(&self) -> bool {
        self.gen.is_some()
    }
}

/// Runs `job` once per trial on the paths it needs and collects the reports.
/// Trial reports of generated runs carry their index and derived seed.
fn per_trial<F>(src: &Source, needed: usize, job: F) -> Result<Vec<Value>>
where
    F: Fn(&[SampledPath]) -> Result<Value> + Sync + Send,
{
    match src.resolve()? {
        Paths::Given(paths) => {
            if paths.len() != needed {
                return Err(invalid("input", format!("this command needs {needed} path(s), got {}", paths.len())));
            }
            Ok(vec![job(&paths)?])
        }
        Paths::Generated { seed } => {
            let exec = if src.trials > 1 {
                Execution::Parallel
            } else {
                Execution::Sequential
            };
            let results = run_trials(exec, src.trials, seed, |i, base| -> Result<Value> {
                let paths = (0..needed as u64).map(|k| src.generate(base, k)).collect::<Result<Vec<_>>>()?;
                let report = job(&paths)?;
                if src.trials == 1 {
                    return Ok(report);
                }
                let mut obj = Map::new();
                obj.insert("trial".into(), json!(i));
                obj.insert("seed".into(), json!(base));
                match report {
                    Value::Object(m) => obj.extend(m),
                    other => {
                        obj.insert("report".into(), other);
                    }
                }
                Ok(Value::Object(obj))
            });
            results.into_iter().collect()
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn operator_for(f: &SampledPath, g: &SampledPath) -> Result<OperatorPath> {
    let d = g.dim();
    if f.dim() == 1 {
        OperatorPath::scalar_multiple_of_identity(f, d)
    } else if f.dim() == d * d {
        OperatorPath::from_matrix_path(f, d)
    } else {
        Err(invalid("input", format!("f has {} columns; expected 1 or {} for g of dimension {d}", f.dim(), d * d)))
    }
}

fn integral_pair<'a>(f: &'a OperatorPath, g: &'a SampledPath, linear: bool) -> (Integrand<'a>, Integrator<'a>) {
    if linear {
        (Integrand::Linear(f), Integrator::Linear(g))
    } else {
        (Integrand::Step(f), Integrator::Step(g))
    }
}

fn linear_wanted(c: Completion, src: &Source) -> bool {
    match c {
        Completion::Step => false,
        Completion::Linear => true,
        Completion::Auto => src.is_generated(),
    }
}

fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Ttv { src, c, out } => {
            let reports = per_trial(&src, 1, |p| {
                let profile = ttv_profile(&p[0]);
                if !(c >= 0.0) || !c.is_finite() {
                    return Err(invalid("c", "truncation level must be finite and ≥ 0"));
                }
                Ok(json!({
                    "c": c,
                    "value": profile.ttv(c),
                    "total_variation": profile.total_variation(),
                    "oscillation": profile.oscillation(),
                }))
            })?;
            emit(reports, &out)
        }
        Command::Pvar { src, p, out } => {
            let reports = per_trial(&src, 1, |x| Ok(json!({ "p": p, "value": p_variation(&x[0], p)? })))?;
            emit(reports, &out)
        }
        Command::Phivar {
            src,
            phi_kind,
            p,
            gamma,
            out,
        } => {
            let (kind, name) = match phi_kind {
                PhiKindArg::Log => (PhiKind::Log, "log"),
                PhiKindArg::Loglog => (PhiKind::LogLog, "loglog"),
            };
            let phi = PhiSpec::family(kind, p, gamma)?;
            let reports = per_trial(&src, 1, |x| {
                Ok(json!({ "kind": name, "p": p, "gamma": gamma, "value": phi_variation(&x[0], &phi)? }))
            })?;
            emit(reports, &out)
        }
        Command::Seminorm { src, p, out } => {
            let reports = per_trial(&src, 1, |x| {
                let r = p_tv_seminorm(&x[0], p)?;
                let mut v = to_value(&r);
                v["value_pow_p"] = json!(r.value.powf(p));
                v["norm"] = json!(tv_p_norm(&x[0], p)?);
                Ok(v)
            })?;
            emit(reports, &out)
        }
        Command::Approx {
            src,
            c,
            lambda,
            completion,
            eps_cont,
            out,
        } => {
            if src.trials > 1 {
                return Err(invalid("trials", "approx emits a single approximant"));
            }
            let linear = linear_wanted(completion, &src);
            let path = match src.resolve()? {
                Paths::Given(mut p) if p.len() == 1 => p.remove(0),
                Paths::Given(p) => return Err(invalid("input", format!("approx needs 1 path, got {}", p.len()))),
                Paths::Generated { seed } => src.generate(derive_seed(seed, 0), 0)?,
            };
            let skeleton = greedy_skeleton(&path, c)?;
            let bounds = sandwich(&path, c, &lambda)?;
            let (approximant, emitted) = if linear {
                let l = linear_approx(&path, c, eps_cont)?;
                let sampled = l.sample(path.times())?;
                (Approximant::Linear(l), sampled)
            } else {
                let s = step_approx(&path, c)?;
                (Approximant::Step(s.clone()), s)
            };
            let mut report = json!({
                "c": c,
                "completion": if linear { "linear" } else { "step" },
                "sup_distance": approximant.sup_distance(&path),
                "total_variation": approximant.total_variation(),
                "sandwich": to_value(&bounds),
                "skeleton": to_value(&skeleton),
            });
            match &approximant {
                Approximant::Linear(l) => report["knots"] = to_value(&l.knots),
                Approximant::Step(_) => {}
            }
            report["path"] = io::to_json(&emitted);
            match out.format {
                Format::Json => write_out(pretty(&report), &out),
                Format::Csv => {
                    let csv = io::to_csv(&emitted);
                    match &out.out {
                        Some(file) => {
                            write_file(file, &csv)?;
                            let mut r = report;
                            r.as_object_mut().expect("object").remove("path");
                            Ok(Outcome::ok(pretty(&r)))
                        }
                        None => Ok(Outcome::ok(csv)),
                    }
                }
            }
        }
        Command::Integrate {
            src,
            int,
            p,
            q,
            refine,
            tags,
            out,
        } => {
            let opts = RsOptions {
                tol: int.tol,
                max_levels: max_levels()?,
                tags: match tags {
                    TagArg::Left => TagRule::Left,
                    TagArg::Mid => TagRule::Mid,
                    TagArg::Right => TagRule::Right,
                },
                exec: Execution::Parallel,
            };
            let exps = match (p, q) {
                (Some(p), Some(q)) => Some((p, q)),
                (None, None) => None,
                _ => return Err(invalid("q", "--p and --q go together")),
            };
            let linear = linear_wanted(int.completion, &src);
            let reports = per_trial(&src, 2, |x| {
                let f = operator_for(&x[0], &x[1])?;
                let (fi, gi) = integral_pair(&f, &x[1], linear);
                let mut report = if refine {
                    let r = rs_integral(&fi, &gi, &opts)?;
                    IntegralReport {
                        value: r.value,
                        method: "refinement",
                        refinement_levels: r.levels,
                        cauchy_gap: r.cauchy_gap,
                        bound_s: None,
                        ly: None,
                    }
                } else {
                    integrate(&fi, &gi, &opts)?
                };
                if let Some((p, q)) = exps {
                    let seqs = choose_sequences(p, q, &f, &x[1])?;
                    let s = young_bound_s(&f, &x[1], &seqs, opts.tol)?;
                    report.bound_s = Some(s.value + s.tail_bound);
                }
                Ok(to_value(&report))
            })?;
            emit(reports, &out)
        }
        Command::LyCheck { src, int, p, q, out } => {
            let opts = RsOptions {
                tol: int.tol,
                max_levels: max_levels()?,
                ..RsOptions::default()
            };
            let linear = linear_wanted(int.completion, &src);
            let reports = per_trial(&src, 2, |x| {
                let f = operator_for(&x[0], &x[1])?;
                let (fi, gi) = integral_pair(&f, &x[1], linear);
                Ok(to_value(&improved_ly_check(&fi, &gi, p, q, &opts)?))
            })?;
            emit(reports, &out)
        }
        Command::Irregularity { src, p, q, tol, out } => {
            let reports = per_trial(&src, 2, |x| {
                let f = operator_for(&x[0], &x[1])?;
                Ok(to_value(&irregularity_check(&f, &x[1], p, q, tol)?))
            })?;
            emit(reports, &out)
        }
        Command::Gen { src, out } => {
            if src.trials > 1 {
                return Err(invalid("trials", "gen emits a single path"));
            }
            let path = match src.resolve()? {
                Paths::Given(mut p) if p.len() == 1 => p.remove(0),
                Paths::Given(_) => return Err(invalid("input", "gen takes a single path")),
                Paths::Generated { seed } => src.generate(derive_seed(seed, 0), 0)?,
            };
            match out.format {
                Format::Json => write_out(pretty(&io::to_json(&path)), &out),
                Format::Csv => write_out(io::to_csv(&path), &out),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn write_file(file: &std::path::Path, text: &str) -> Result<()> {
    std::fs::write(file, text).map_err(|e| Error::Io(format!("{}: {e}", file.display())))
}

fn write_out(text: String, out: &Output) -> Result<Outcome> {
    match &out.out {
        Some(file) => {
            write_file(file, &text)?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn emit(reports: Vec<Value>, out: &Output) -> Result<Outcome> {
    let text = match out.format {
        Format::Json => match <[Value; 1]>::try_from(reports) {
            Ok([one]) => pretty(&one),
            Err(many) => pretty(&Value::Array(many)),
        },
        Format::Csv => to_csv_table(&reports)?,
    };
    write_out(text, out)
}

/// Flattens nested objects to dotted keys and arrays to `key.index`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn to_csv_table(reports: &[Value]) -> Result<String> {
    let rows: Vec<Vec<(String, String)>> = reports
        .iter()
        .map(|r| {
            let mut cells = Vec::new();
            flatten("", r, &mut cells);
            cells
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&header).map_err(io_err)?;
    for row in &rows {
        let record = header.iter().map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, v)| v.as_str()));
        w.write_record(record).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
