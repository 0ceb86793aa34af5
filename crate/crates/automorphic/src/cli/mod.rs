//! Command-line front end: argument parsing, layered configuration, dispatch
//! and CSV/JSON output.

pub mod verify;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::complex::ComplexArg;
use crate::eisenstein::{eval_e_direct, eval_e_weighted, TailPolicy, DEFAULT_B0};
use crate::error::{Error, Result};
use crate::lattice::{parse_count, HyperbolicPoint, ModelConfig, Psl2z};
use crate::lfunc::{asymptotic_constants, coeff_sum_table, theorem_scans, LSpec, ScanKind, TripleScanParams};
use crate::quad::QuadratureConfig;
use crate::renorm::{rn_integral, rn_triple_product, triple_product_quadrature, EisensteinPolynomial, TripleMode};
use crate::reptheory::{norm_growth_probe, sobolev_growth_probe};

pub use verify::{verify_all, verify_suite, Check, CheckStatus, VerifyReport, SUITES};

/// Threads used by `verify` unless overridden, so reports do not depend on the host.
pub const VERIFY_THREADS: usize = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RnMode {
    Quadrature,
    Unfolded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanWhich {
    /// ∫|L(½+it)|²dt.
    Thm1,
    /// ∫|R.N. triple product|²e^{πt}dt.
    Thm2,
}

#[derive(Debug, Parser)]
#[command(name = "automorphic", version, about = "Eisenstein series, renormalized integrals and Rankin-Selberg asymptotics for PSL(2,Z)")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    /// File of `key = value` lines, applied under the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write results here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    /// Worker threads (default: all cores; 4 for verify).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Largest index covered by the divisor sieve (accepts `1e6`).
    #[arg(long, global = true)]
    pub sieve_limit: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// E(z, s) at one or more points, as CSV rows x, y, Re E, Im E.
    Eval {
        #[arg(long)]
        s: ComplexArg,
        #[arg(long, num_args = 1.., required = true)]
        x: Vec<f64>,
        /// One height per x, or a single height for all.
        #[arg(long, num_args = 1.., required = true)]
        y: Vec<f64>,
        /// Weight 2υ series; the value given is υ.
        #[arg(long, default_value_t = 0)]
        weight: i32,
        /// Use the coset sum with this cutoff instead of the Fourier expansion.
        #[arg(long)]
        direct: Option<usize>,
    },
    /// Renormalized integral: of E(r)·conj E(s), or with --t of E(r)E(s)·conj E(½+it).
    Rn {
        #[arg(long)]
        r: ComplexArg,
        #[arg(long)]
        s: ComplexArg,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long = "B", default_value_t = DEFAULT_B0)]
        b: f64,
        #[arg(long, value_enum, default_value_t = RnMode::Quadrature)]
        mode: RnMode,
    },
    /// Coefficient sums S(M) against the predicted asymptotics.
    Sum {
        #[arg(long)]
        t0: f64,
        #[arg(long = "M", value_delimiter = ',', num_args = 1.., required = true)]
        m: Vec<String>,
    },
    /// Cumulative mean-square scan on the critical line.
    Scan {
        #[arg(long)]
        t0: f64,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long, value_enum)]
        which: ScanWhich,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// r for the triple-product scan.
        #[arg(long, default_value = "0.5+1i")]
        r: ComplexArg,
        /// s for the triple-product scan.
        #[arg(long, default_value = "0.5+2i")]
        s: ComplexArg,
    },
    /// Constants of the coefficient-sum asymptotics.
    Constants {
        #[arg(long)]
        t0: f64,
    },
    /// Growth probes for the principal series.
    Probe {
        #[command(subcommand)]
        which: ProbeCommand,
    },
    /// Run identity and bound checks and print a JSON report.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Multiplies every tolerance, quadrature tolerances included.
        #[arg(long, default_value_t = 1.0)]
        tol_scale: f64,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum ProbeCommand {
    /// log‖π^{½+it}(g_ε)e₀‖² against t.
    NormGrowth {
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 25.0)]
        tmax: f64,
        #[arg(long, default_value_t = 1.0)]
        tstep: f64,
    },
    /// S_β(π^{½+it}(g_ε)e₀)·ε^β across ε.
    Sobolev {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.1, 0.05, 0.025])]
        eps: Vec<f64>,
    },
}

/// Everything outside the subcommand, after merging defaults, the
/// environment, the config file and the flags (later wins).
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub model: ModelConfig,
    pub quad: QuadratureConfig,
    pub tail: TailPolicy,
    pub format: Option<OutputFormat>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Settings {
    pub fn from_env() -> Result<Self> {
        Ok(Self {
            model: ModelConfig::from_env()?,
            quad: QuadratureConfig::default(),
            tail: TailPolicy::default(),
            format: None,
            output: None,
            threads: None,
        })
    }

    /// Applies `key = value` lines; `#` starts a comment and unknown keys are errors.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Invalid(format!("config line {}: {what}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            let count = || parse_count(value).ok_or_else(|| bad(&format!("'{value}' is not a count")));
            let real = || value.parse::<f64>().map_err(|_| bad(&format!("'{value}' is not a number")));
            match key {
                "sieve_limit" => self.model.sieve_limit = count()?,
                "reduction_cap" => self.model.reduction_cap = count()?,
                "abs_tol" => self.quad.abs_tol = real()?,
                "rel_tol" => self.quad.rel_tol = real()?,
                "max_subdivisions" => self.quad.max_subdivisions = count()?,
                "target_tail" => self.tail.target_tail = real()?,
                "mode_cap" => self.tail.hard_cap = count()?,
                "threads" => self.threads = Some(count()?),
                "format" => {
                    self.format = Some(OutputFormat::from_str(value, true).map_err(|_| bad(&format!("unknown format '{value}'")))?)
                }
                "output" => self.output = Some(PathBuf::from(value)),
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        self.tail.validate()?;
        if self.threads == Some(0) {
            return Err(Error::Invalid("threads must be positive".into()));
        }
        if self.model.sieve_limit == 0 {
            return Err(Error::Invalid("sieve_limit must be positive".into()));
        }
        Ok(())
    }
}

/// A fully resolved invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub settings: Settings,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let mut settings = Settings::from_env()?;
        if let Some(path) = &cli.config {
            settings.apply_file(path)?;
        }
        if let Some(v) = &cli.sieve_limit {
            settings.model.sieve_limit = parse_count(v).ok_or_else(|| Error::Invalid(format!("--sieve-limit '{v}' is not a count")))?;
        }
        if let Some(v) = cli.abs_tol {
            settings.quad.abs_tol = v;
        }
        if let Some(v) = cli.rel_tol {
            settings.quad.rel_tol = v;
        }
        if let Some(v) = cli.max_subdivisions {
            settings.quad.max_subdivisions = v;
        }
        if cli.format.is_some() {
            settings.format = cli.format;
        }
        if cli.output.is_some() {
            settings.output = cli.output;
        }
        if cli.threads.is_some() {
            settings.threads = cli.threads;
        }
        settings.validate()?;
        Ok(Self { command: cli.command, settings })
    }
}

/// Formats a real to 15 significant digits, in plain notation where that stays short.
pub fn fmt15(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    let a = rounded.abs();
    if rounded == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt15).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Invalid(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// What a command produced: text for the output and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
    note: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, passed: true, note: None }
    }
}

fn dispatch(command: &Command, settings: &Settings) -> Result<Outcome> {
    let model = Psl2z::new(settings.model);
    let format = settings.format;
    let quad = &settings.quad;
    match command {
        Command::Eval { s, x, y, weight, direct } => {
            let ys: Vec<f64> = match (x.len(), y.len()) {
                (_, 1) => vec![y[0]; x.len()],
                (a, b) if a == b => y.clone(),
                (a, b) => return Err(Error::Invalid(format!("{a} x values but {b} y values"))),
            };
            let mut rows = Vec::with_capacity(x.len());
            for (&xx, &yy) in x.iter().zip(&ys) {
                let z = HyperbolicPoint::new(xx, yy)?;
                let v = match direct {
                    Some(cutoff) => {
                        if *weight != 0 {
                            return Err(Error::Invalid("direct summation is only available for weight 0".into()));
                        }
                        eval_e_direct(z, s.0, *cutoff)?.value
                    }
                    None => eval_e_weighted(&model, z, s.0, *weight, settings.tail)?,
                };
                rows.push(vec![xx, yy, v.re, v.im]);
            }
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => csv(&["x", "y", "re", "im"], rows),
                OutputFormat::Json => to_json(&rows.iter().map(|r| json!({"x": r[0], "y": r[1], "re": r[2], "im": r[3]})).collect::<Vec<_>>())?,
            }))
        }
        Command::Rn { r, s, t, b, mode } => {
            let result = match (t, mode) {
                (Some(t), RnMode::Unfolded) => {
                    let v = rn_triple_product(&model, r.0, s.0, *t, TripleMode::Unfolded, quad)?;
                    let text = match format.unwrap_or(OutputFormat::Json) {
                        OutputFormat::Json => to_json(&json!({"value": {"re": v.re, "im": v.im}, "mode": "unfolded"}))?,
                        OutputFormat::Csv => csv(&["re", "im"], [vec![v.re, v.im]]),
                    };
                    return Ok(Outcome::ok(text));
                }
                (Some(t), RnMode::Quadrature) => triple_product_quadrature(&model, r.0, s.0, *t, *b, settings.tail, quad)?,
                (None, RnMode::Quadrature) => {
                    let poly = EisensteinPolynomial::product(&model, settings.tail, &[(r.0, false), (s.0, true)])?;
                    rn_integral(&poly, *b, quad)?
                }
                (None, RnMode::Unfolded) => return Err(Error::Invalid("--mode unfolded needs --t".into())),
            };
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => to_json(&result)?,
                OutputFormat::Csv => csv(
                    &["re", "im", "B_used", "quad_error_estimate", "B_independence_spread", "y_max"],
                    [vec![result.value.re, result.value.im, result.b_used, result.quad_error_estimate, result.b_independence_spread, result.y_max]],
                ),
            }))
        }
        Command::Sum { t0, m } => {
            let ms = m
                .iter()
                .map(|v| parse_count(v).filter(|n| *n > 0).ok_or_else(|| Error::Invalid(format!("--M '{v}' is not a positive count"))))
                .collect::<Result<Vec<_>>>()?;
            let table = coeff_sum_table(&LSpec::new(&model, *t0)?, &ms)?;
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => csv(&["M", "S(M)", "prediction", "residual"], table.iter().map(|r| vec![r.m as f64, r.sum, r.prediction, r.residual])),
                OutputFormat::Json => to_json(&table)?,
            }))
        }
        Command::Scan { t0, t_end, which, step, r, s } => {
            let kind = match which {
                ScanWhich::Thm1 => ScanKind::LSquare,
                ScanWhich::Thm2 => ScanKind::TripleProduct,
            };
            let report = theorem_scans(&LSpec::new(&model, *t0)?, *t_end, kind, *step, TripleScanParams { r: r.0, s: s.0 })?;
            Ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => Outcome {
                    text: csv(&["t", "integrand", "cumulative"], report.t.iter().zip(&report.integrand).zip(&report.cumulative).map(|((t, v), c)| vec![*t, *v, *c])),
                    passed: true,
                    note: Some(format!("fitted exponent {} on [{}, {}]", fmt15(report.fitted_exponent), report.fit_window.0, report.fit_window.1)),
                },
                OutputFormat::Json => Outcome::ok(to_json(&report)?),
            })
        }
        Command::Constants { t0 } => {
            let k = asymptotic_constants(&LSpec::new(&model, *t0)?)?;
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Json) {
                OutputFormat::Json => to_json(&k)?,
                OutputFormat::Csv => csv(
                    &["t0", "main_loglinear", "main_linear", "c_one_re", "c_one_im", "c_osc_re", "c_osc_im"],
                    [vec![k.t0, k.main_loglinear, k.main_linear, k.c_one.re, k.c_one.im, k.c_osc.re, k.c_osc.im]],
                ),
            }))
        }
        Command::Probe { which } => probe(which, format),
        Command::Verify { suite, tol_scale } => {
            if !(*tol_scale > 0.0) {
                return Err(Error::Invalid(format!("--tol-scale must be positive, got {tol_scale}")));
            }
            let report = if suite == "all" { verify_all(&model, *tol_scale) } else { verify_suite(suite, &model, *tol_scale)? };
            Ok(Outcome { text: to_json(&report)?, passed: report.passed, note: None })
        }
    }
}

fn probe(which: &ProbeCommand, format: Option<OutputFormat>) -> Result<Outcome> {
    match which {
        ProbeCommand::NormGrowth { eps, tmax, tstep } => {
            if !(*tstep > 0.0) || !(*tmax >= *tstep) {
                return Err(Error::Invalid(format!("need 0 < tstep <= tmax (tstep = {tstep}, tmax = {tmax})")));
            }
            let n = (tmax / tstep).floor() as usize;
            let grid: Vec<f64> = (1..=n).map(|j| j as f64 * tstep).collect();
            let rep = norm_growth_probe(*eps, &grid)?;
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => to_json(&rep)?,
                OutputFormat::Csv => {
                    let mut text = csv(&["t", "norm_sq"], rep.t.iter().zip(&rep.norm_sq).map(|(t, v)| vec![*t, *v]));
                    let fit = json!({"eps": rep.eps, "slope": rep.slope, "constant": rep.constant, "lower_bound": rep.lower_bound, "upper_bound": rep.upper_bound});
                    writeln!(text, "{fit}").ok();
                    text
                }
            }))
        }
        ProbeCommand::Sobolev { beta, t, eps } => {
            let rep = sobolev_growth_probe(*beta, *t, eps)?;
            Ok(Outcome::ok(match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => to_json(&rep)?,
                OutputFormat::Csv => {
                    let rows = rep.eps.iter().zip(&rep.sobolev).zip(&rep.scaled).map(|((e, s), sc)| vec![*e, *s, *sc]);
                    let mut text = csv(&["eps", "sobolev", "scaled"], rows);
                    let fit = json!({"beta": rep.beta, "t": rep.t, "max_scaled": rep.max_scaled, "spread": rep.spread, "slope": rep.slope});
                    writeln!(text, "{fit}").ok();
                    text
                }
            }))
        }
    }
}

/// Runs a resolved invocation, writing results to the configured output and
/// diagnostics to `err`. Returns the process exit code.
pub fn run_with(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let threads = config.settings.threads.or(matches!(config.command, Command::Verify { .. }).then_some(VERIFY_THREADS));
    let pool = match threads.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => Some(pool),
        Some(Err(e)) => {
            writeln!(err, "error: cannot start thread pool: {e}").ok();
            return EXIT_FAILURE;
        }
        None => None,
    };
    let go = || dispatch(&config.command, &config.settings);
    let outcome = match &pool {
        Some(pool) => pool.install(go),
        None => go(),
    };
    match outcome {
        Ok(o) => {
            let written = match &config.settings.output {
                Some(path) => std::fs::write(path, &o.text).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                writeln!(err, "error: {e}").ok();
                return EXIT_FAILURE;
            }
            if let Some(note) = o.note {
                writeln!(err, "{note}").ok();
            }
            if o.passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            match e {
                Error::Invalid(_) | Error::SieveLimit { .. } => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

pub fn run(config: &RunConfig) -> i32 {
    run_with(config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Parses `args` (program name first) and runs them.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                write!(err, "{text}").ok();
            } else {
                write!(out, "{text}").ok();
            }
            return code;
        }
    };
    match RunConfig::from_cli(cli) {
        Ok(cfg) => run_with(&cfg, out, err),
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            EXIT_USAGE
        }
    }
}
