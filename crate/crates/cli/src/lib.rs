//! `shz`: evaluate Schur multiple zeta values of Hurwitz type, run identity
//! suites and inspect lattice-path patterns.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use schur_hurwitz::identities::suite::{builtin, meets_expectation, parse_content_list, parse_manifest, run_case};
use schur_hurwitz::lgv::enumerate_patterns;
use schur_hurwitz::schurzeta::{schur_eval, SchurInstance};
use schur_hurwitz::shapes::RimKind;
use schur_hurwitz::tableaux::text::parse_exponent_input;
use schur_hurwitz::tableaux::ContentSpec;
use schur_hurwitz::{EvalConfig, Partition, SkewShape, TailMode, ZetaError};

/// Cutoff used when neither a flag, a manifest entry nor `SHZ_CUTOFF` sets one.
pub const DEFAULT_CUTOFF: usize = 2000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Zeta(ZetaError::Domain(_) | ZetaError::Precondition(_)) => EXIT_DOMAIN,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "shz", version, about = "Schur multiple zeta-functions of Hurwitz type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one Schur multiple zeta value with a certified error bound.
    Eval(EvalArgs),
    /// Run an identity suite and print one JSON report per check.
    Check(CheckArgs),
    /// Count and draw lattice-path patterns of a shape.
    Paths(PathsArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Straight shape, e.g. `2,2`.
    #[arg(long, conflicts_with = "skew")]
    pub shape: Option<String>,
    /// Skew shape `outer/inner`, e.g. `3,2/1`.
    #[arg(long)]
    pub skew: Option<String>,
    /// Exponents by content, e.g. `-1=2,0=3,1=2`; complex values as `2+1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Shifts by content, e.g. `0=0.3`; missing contents default to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// JSON file with a tableau, `{"s": …, "x": …}` or `{"z": …, "y": …}`.
    #[arg(long)]
    pub tableau_file: Option<PathBuf>,
    /// Largest summation index [env: SHZ_CUTOFF, default: 2000].
    #[arg(long, env = "SHZ_CUTOFF")]
    pub cutoff: Option<usize>,
    /// Report the truncated sum without the tail estimate.
    #[arg(long)]
    pub bound_only: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Built-in suite: jacobi-trudi, giambelli, hook, frobenius, dirichlet,
    /// derivative, lgv-exact, reductions or all.
    #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
    pub builtin: Option<String>,
    /// Suite manifest file.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Cutoff for every check, overriding manifest entries. Without it the
    /// manifest's value is used, then SHZ_CUTOFF, then 2000.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Number of checks run at once (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    H,
    E,
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    /// Partition, e.g. `3,2`.
    #[arg(long)]
    pub shape: String,
    /// Height of the lattice.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "h")]
    pub kind: KindArg,
    /// Include a text diagram of every pattern.
    #[arg(long)]
    pub render: bool,
}

fn env_cutoff() -> CliResult<usize> {
    match std::env::var("SHZ_CUTOFF") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("SHZ_CUTOFF must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CUTOFF),
    }
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn emit(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{v}");
}

#[derive(Serialize)]
struct EvalOutput {
    shape: String,
    value_re: f64,
    value_im: f64,
    err_bound: f64,
    cutoff: usize,
    runtime_ms: f64,
}

fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> CliResult<i32> {
    let start = Instant::now();
    let shape: Option<SkewShape> = match (&a.shape, &a.skew) {
        (Some(s), _) => Some(s.parse::<Partition>()?.as_skew()),
        (None, Some(s)) => Some(s.parse()?),
        (None, None) => None,
    };
    let (s, x) = if let Some(path) = &a.tableau_file {
        parse_exponent_input(&read(path)?, shape.as_ref())?
    } else {
        let shape = shape.ok_or_else(|| CliError::Usage("give --shape, --skew or --tableau-file".into()))?;
        let z = a.z.as_deref().ok_or_else(|| CliError::Usage("--z is required without --tableau-file".into()))?;
        let spec = ContentSpec {
            z: parse_content_list::<Complex64>(z)?,
            y: a.y.as_deref().map(parse_content_list::<f64>).transpose()?.unwrap_or_default(),
        };
        schur_hurwitz::tableaux::expand_content(&spec, &shape)?
    };
    let mut cfg = EvalConfig::with_cutoff(a.cutoff.unwrap_or(DEFAULT_CUTOFF));
    if a.bound_only {
        cfg.tail_mode = TailMode::BoundOnly;
    }
    let inst = SchurInstance::new(s, x)?;
    let v = schur_eval(&inst, &cfg)?;
    let o = EvalOutput {
        shape: inst.shape().to_string(),
        value_re: v.value.re,
        value_im: v.value.im,
        err_bound: v.err_bound,
        cutoff: cfg.cutoff,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    emit(out, &serde_json::to_value(o).expect("plain struct"));
    Ok(EXIT_OK)
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let text = match (&a.builtin, &a.manifest) {
        (Some(name), _) => builtin(name)?,
        (None, Some(path)) => read(path)?,
        (None, None) => return Err(CliError::Usage("give --builtin or --manifest".into())),
    };
    let cases = parse_manifest(&text)?;
    let base = EvalConfig::with_cutoff(env_cutoff()?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let start = Instant::now();
    let results: Vec<_> = pool.install(|| cases.par_iter().map(|c| run_case(c, &base, a.cutoff)).collect());

    let mut unexpected = 0usize;
    let mut errors = 0usize;
    let mut passed = 0usize;
    for (case, res) in cases.iter().zip(results) {
        match res {
            Ok(reports) => {
                let ok = meets_expectation(case, &reports);
                unexpected += usize::from(!ok);
                for r in &reports {
                    passed += usize::from(r.pass);
                    let mut v = serde_json::to_value(r).expect("report serializes");
                    let obj = v.as_object_mut().expect("report is an object");
                    obj.insert("line".into(), json!(case.line));
                    obj.insert("margin".into(), json!(r.budget + r.slack - r.discrepancy));
                    obj.insert("expected_pass".into(), json!(case.expect_pass));
                    obj.insert("as_expected".into(), json!(ok));
                    emit(out, &v);
                }
            }
            Err(e) => {
                errors += 1;
                emit(
                    out,
                    &json!({
                        "line": case.line,
                        "identity_id": case.identity,
                        "shape": case.shape,
                        "error": e.to_string(),
                        "as_expected": false,
                    }),
                );
            }
        }
    }
    let _ = writeln!(
        err,
        "{} checks: {passed} passed, {unexpected} not as expected, {errors} errors ({:.1} s)",
        cases.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(if unexpected + errors == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_paths(a: &PathsArgs, out: &mut dyn Write) -> CliResult<i32> {
    let lambda: Partition = a.shape.parse()?;
    let kind = match a.kind {
        KindArg::H => RimKind::H,
        KindArg::E => RimKind::E,
    };
    let patterns = enumerate_patterns(&lambda, a.n, kind)?;
    let type_label = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    let mut by_type: BTreeMap<String, usize> = BTreeMap::new();
    let mut nonint: BTreeMap<String, usize> = BTreeMap::new();
    for p in &patterns {
        *by_type.entry(type_label(&p.sigma)).or_default() += 1;
        if p.is_nonintersecting() {
            *nonint.entry(type_label(&p.sigma)).or_default() += 1;
        }
    }
    let mut v = json!({
        "shape": lambda.to_string(),
        "height": a.n,
        "kind": kind,
        "patterns": patterns.len(),
        "by_type": by_type,
        "nonintersecting_by_type": nonint,
    });
    if a.render {
        let diagrams: Vec<Value> = patterns
            .iter()
            .map(|p| json!({ "type": type_label(&p.sigma), "sign": p.sign(), "diagram": p.render() }))
            .collect();
        v["diagrams"] = Value::Array(diagrams);
    }
    emit(out, &v);
    Ok(EXIT_OK)
}

/// Runs a parsed command, writing JSON lines to `out` and messages to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Check(a) => cmd_check(a, out, err),
        Command::Paths(a) => cmd_paths(a, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "shz: {e}");
            e.exit_code()
        }
    }
}
