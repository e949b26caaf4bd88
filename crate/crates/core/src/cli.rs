//! `foxh` command-line front end.
//!
//! Subcommands `eval`, `verify`, `oracle` and `gammacheck` each write one
//! report (JSON by default, CSV on request) to `--out` or standard output.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 numerical failure,
//! 3 empty admissible region.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::checks::{
    oracle_catalog, run_gamma_suite, run_oracle, GammaCheckConfig, GammaSuiteReport, OracleReport,
    DEFAULT_GAMMA_SAMPLES,
};
use crate::evaluator::{evaluate_contour, ContourSpec, Method, QuadratureOptions};
use crate::hspec::{Argument, HFunctionSpec, ParamPair, RawSpec};
use crate::identities::{
    admissible_sector, build_identity, integrand_residual, kernel_residual, strip_grid, verify, AdmissibleRegion,
    IdentityCase, IdentityId, IdentityParams, Side, Verdict, VerificationReport,
};
use crate::report::{cell, format_f64, to_json_string, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_EMPTY_REGION: i32 = 3;

/// Kernel-level tolerance for MAIN (derivation and kernel comparison).
pub const MAIN_KERNEL_TOL: f64 = 1e-10;
/// Kernel-level tolerance for G41-G43.
pub const PURE_KERNEL_TOL: f64 = 1e-11;

const TOOL: &str = "foxh";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "foxh",
    version,
    about = "Evaluate Fox H-functions and verify H-function identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an H-function on a grid of arguments.
    Eval(EvalArgs),
    /// Verify an identity by quadrature and at the integrand level.
    Verify(VerifyArgs),
    /// Compare contour quadrature with the residue series on the built-in catalog.
    Oracle(OracleArgs),
    /// Run the seeded gamma-function identity suite.
    Gammacheck(GammaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report path; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
struct FloatList(Vec<f64>);

fn parse_floats(text: &str) -> Result<FloatList, String> {
    let values = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("{t:?} is not a finite number")),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FloatList(values))
}

fn parse_tol(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("tolerance must be a positive number, got {text:?}")),
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated moduli.
    #[arg(long, value_parser = parse_floats, allow_hyphen_values = true)]
    moduli: Option<FloatList>,
    /// Comma-separated phases (radians, not reduced).
    #[arg(long, value_parser = parse_floats, allow_hyphen_values = true)]
    phases: Option<FloatList>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    /// Relative quadrature tolerance.
    #[arg(long, value_parser = parse_tol, default_value_t = 1e-10)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    identity: IdentityId,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Base spec (JSON). Defaults to H^{1,1}_{1,1}[(0,1);(0,1)].
    #[arg(long)]
    base: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
    /// Relative residual tolerance for the quadrature-level comparison.
    #[arg(long, value_parser = parse_tol, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_parser = parse_tol, default_value_t = crate::checks::ORACLE_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GammaArgs {
    /// Samples per check.
    #[arg(long, default_value_t = DEFAULT_GAMMA_SAMPLES)]
    count: usize,
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    EmptyRegion(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::EmptyRegion(_) => EXIT_EMPTY_REGION,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Eval,
    Verify,
    Oracle,
    Gammacheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub delta: f64,
}

/// Fully resolved run configuration, embedded in every report. The output
/// path is not part of it, so reports of identical runs are identical
/// wherever they are written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<HFunctionSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentityId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ScalarParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<HFunctionSpec>,
    pub moduli: Vec<f64>,
    pub phases: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureOptions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inject_fault: Option<bool>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: CommandKind, output: &OutputArgs, tol: f64) -> Self {
        Self {
            command,
            spec_path: None,
            spec: None,
            identity: None,
            params: None,
            base_path: None,
            base: None,
            moduli: Vec::new(),
            phases: Vec::new(),
            tol,
            seed: output.seed,
            format: output.format,
            quadrature: None,
            count: None,
            inject_fault: None,
            out: output.out.clone(),
        }
    }

    fn with_grid(mut self, grid: &GridArgs, moduli: &[f64], phases: &[f64]) -> Self {
        self.moduli = grid.moduli.clone().map_or_else(|| moduli.to_vec(), |l| l.0);
        self.phases = grid.phases.clone().map_or_else(|| phases.to_vec(), |l| l.0);
        self
    }

    /// Sample arguments in canonical order: by modulus, then phase.
    pub fn grid(&self) -> Result<Vec<Argument>, String> {
        if self.moduli.is_empty() || self.phases.is_empty() {
            return Err("sample grid is empty".into());
        }
        let mut points = Vec::with_capacity(self.moduli.len() * self.phases.len());
        for &m in &self.moduli {
            for &p in &self.phases {
                points.push(Argument::new(m, p).map_err(|e| e.to_string())?);
            }
        }
        points.sort_by(|a, b| {
            a.modulus()
                .total_cmp(&b.modulus())
                .then(a.phase().total_cmp(&b.phase()))
        });
        points.dedup();
        Ok(points)
    }
}

#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

struct Outcome {
    json: String,
    csv: Table,
    code: i32,
    summary: String,
}

fn render<T: Serialize>(config: &RunConfig, body: T) -> String {
    to_json_string(&Envelope {
        tool: TOOL,
        version: VERSION,
        config,
        body,
    })
    .expect("report types serialize")
}

fn read_spec(path: &PathBuf) -> Result<HFunctionSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let raw = RawSpec::from_json(&text).map_err(|e| usage(format!("{}: malformed spec: {e}", path.display())))?;
    raw.validate()
        .map_err(|e| usage(format!("{}: invalid spec: {e}", path.display())))
}

fn default_base() -> HFunctionSpec {
    RawSpec::new(1, 1, vec![ParamPair::real(0.0, 1.0)], vec![ParamPair::real(0.0, 1.0)])
        .validate()
        .expect("default base is valid")
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok((config, outcome)) => {
            if config.out.is_some() {
                println!("{}", outcome.summary);
            } else {
                eprintln!("{}", outcome.summary);
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("foxh: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(RunConfig, Outcome), CliError> {
    let config = match command {
        Command::Eval(a) => prepare_eval(a)?,
        Command::Verify(a) => prepare_verify(a)?,
        Command::Oracle(a) => prepare_oracle(a),
        Command::Gammacheck(a) => prepare_gammacheck(a),
    };
    let outcome = match config.command {
        CommandKind::Eval => run_eval(&config)?,
        CommandKind::Verify => run_verify(&config)?,
        CommandKind::Oracle => run_oracle_cmd(&config)?,
        CommandKind::Gammacheck => run_gammacheck(&config),
    };
    emit(&config, &outcome)?;
    Ok((config, outcome))
}

fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let text = match config.format {
        Format::Json => outcome.json.clone(),
        Format::Csv => outcome.csv.to_csv().map_err(|e| usage(e.to_string()))?,
    };
    match &config.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn prepare_eval(a: EvalArgs) -> Result<RunConfig, CliError> {
    let spec = read_spec(&a.spec)?;
    let mut c = RunConfig::new(CommandKind::Eval, &a.output, a.tol).with_grid(&a.grid, &[1.0], &[0.0]);
    c.spec_path = Some(a.spec.display().to_string());
    c.spec = Some(spec);
    c.quadrature = Some(QuadratureOptions {
        rel_tol: a.tol,
        ..QuadratureOptions::default()
    });
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointError {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub argument: Argument,
    pub value: Option<Complex64>,
    pub error_estimate: Option<f64>,
    pub method: Option<Method>,
    pub nodes_used: Option<usize>,
    pub contour: Option<ContourSpec>,
    pub error: Option<PointError>,
}

#[derive(Debug, Serialize)]
struct EvalBody<'a> {
    status: Verdict,
    points: &'a [EvalRow],
}

pub fn run_eval_rows(spec: &HFunctionSpec, grid: &[Argument], opts: &QuadratureOptions) -> Vec<EvalRow> {
    grid.par_iter()
        .map(|z| match evaluate_contour(spec, *z, opts) {
            Ok(r) => EvalRow {
                argument: *z,
                value: Some(r.value),
                error_estimate: Some(r.error_estimate),
                method: Some(r.method),
                nodes_used: Some(r.nodes_used),
                contour: r.contour,
                error: None,
            },
            Err(e) => EvalRow {
                argument: *z,
                value: None,
                error_estimate: None,
                method: None,
                nodes_used: None,
                contour: None,
                error: Some(PointError {
                    kind: e.kind(),
                    message: e.to_string(),
                }),
            },
        })
        .collect()
}

fn run_eval(c: &RunConfig) -> Result<Outcome, CliError> {
    let grid = c.grid().map_err(usage)?;
    let spec = c.spec.as_ref().expect("eval config carries a spec");
    let opts = c.quadrature.expect("eval config carries options");
    let rows = run_eval_rows(spec, &grid, &opts);
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    let status = if failures == 0 { Verdict::Pass } else { Verdict::Fail };

    let mut csv = Table::new(vec![
        "modulus",
        "phase",
        "value_re",
        "value_im",
        "error_estimate",
        "method",
        "nodes_used",
        "error_kind",
        "error",
    ]);
    for r in &rows {
        csv.push(vec![
            format_f64(r.argument.modulus()),
            format_f64(r.argument.phase()),
            cell(r.value.map(|v| v.re)),
            cell(r.value.map(|v| v.im)),
            cell(r.error_estimate),
            r.method.map(|m| method_name(m).to_string()).unwrap_or_default(),
            r.nodes_used.map(|n| n.to_string()).unwrap_or_default(),
            r.error.as_ref().map(|e| e.kind.to_string()).unwrap_or_default(),
            r.error.as_ref().map(|e| e.message.clone()).unwrap_or_default(),
        ]);
    }
    Ok(Outcome {
        json: render(c, EvalBody { status, points: &rows }),
        csv,
        code: if failures == 0 { EXIT_OK } else { EXIT_NUMERICAL },
        summary: format!("eval: {} points, {} errors", rows.len(), failures),
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Contour => "contour",
        Method::Series => "series",
        Method::ClosedForm => "closed_form",
    }
}

fn prepare_verify(a: VerifyArgs) -> Result<RunConfig, CliError> {
    let base = match &a.base {
        Some(path) => read_spec(path)?,
        None => default_base(),
    };
    let mut c = RunConfig::new(CommandKind::Verify, &a.output, a.tol).with_grid(&a.grid, &[0.4, 0.8], &[0.0]);
    c.identity = Some(a.identity);
    c.params = Some(ScalarParams {
        alpha: a.alpha,
        beta: a.beta,
        lambda: a.lambda,
        delta: a.delta,
    });
    c.base_path = a.base.map(|p| p.display().to_string());
    c.base = Some(base);
    c.quadrature = Some(QuadratureOptions::default());
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelPointRecord {
    pub check: &'static str,
    pub argument: Argument,
    pub s: Complex64,
    pub relative: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheckReport {
    pub tolerance: f64,
    pub strip: (f64, f64),
    pub points: usize,
    pub max_relative: f64,
    pub passed: bool,
    /// Failures first, then the largest residuals.
    pub worst: Vec<KernelPointRecord>,
}

/// Integrand-level checks on a 5 × 5 grid of `s` over the middle third of the
/// common strip, at every sample argument. MAIN is checked both through the
/// rearranged integrand and term by term; G41-G43 term by term.
pub fn kernel_checks(case: &IdentityCase, params: &IdentityParams, samples: &[Argument]) -> Option<KernelCheckReport> {
    let tolerance = match case.id {
        IdentityId::Main => MAIN_KERNEL_TOL,
        IdentityId::G41 | IdentityId::G42 | IdentityId::G43 => PURE_KERNEL_TOL,
        IdentityId::R1981 | IdentityId::Rmulti => return None,
    };
    let strip = case.common_strip()?;
    let grid = strip_grid(strip);
    let mut records = Vec::new();
    for z in samples {
        for s in &grid {
            let mut push = |check, result: Result<f64, String>| {
                let (relative, error) = match result {
                    Ok(r) => (Some(r), None),
                    Err(e) => (None, Some(e)),
                };
                records.push(KernelPointRecord {
                    check,
                    argument: *z,
                    s: *s,
                    relative,
                    error,
                });
            };
            push(
                "kernel",
                kernel_residual(case, *z, *s)
                    .map(|r| r.relative)
                    .map_err(|e| e.to_string()),
            );
            if case.id == IdentityId::Main {
                push(
                    "derivation",
                    integrand_residual(params, *z, *s)
                        .map(|r| r.relative)
                        .map_err(|e| e.to_string()),
                );
            }
        }
    }
    let points = records.len();
    let badness = |r: &KernelPointRecord| r.relative.unwrap_or(f64::INFINITY);
    let max_relative = records.iter().map(badness).fold(0.0, f64::max);
    let passed = records.iter().all(|r| badness(r) <= tolerance);
    records.sort_by(|a, b| badness(b).total_cmp(&badness(a)));
    records.truncate(5);
    Some(KernelCheckReport {
        tolerance,
        strip,
        points,
        max_relative,
        passed,
        worst: records,
    })
}

#[derive(Debug, Serialize)]
struct VerifyBody<'a> {
    identity: IdentityId,
    verdict: Verdict,
    notes: Vec<&'static str>,
    admissible_region: AdmissibleRegion,
    excluded: Vec<Argument>,
    case: &'a IdentityCase,
    verification: &'a VerificationReport,
    kernel_checks: Option<KernelCheckReport>,
}

fn run_verify(c: &RunConfig) -> Result<Outcome, CliError> {
    let id = c.identity.expect("verify config carries an identity");
    let p = c.params.expect("verify config carries params");
    let params = IdentityParams::new(
        p.alpha,
        p.beta,
        p.lambda,
        p.delta,
        c.base.clone().expect("verify config carries a base"),
    );
    let grid = c.grid().map_err(usage)?;
    let case = build_identity(id, &params).map_err(usage)?;
    let region = admissible_sector(&case).map_err(|e| CliError::EmptyRegion(e.to_string()))?;
    let (admitted, excluded): (Vec<Argument>, Vec<Argument>) = grid.into_iter().partition(|z| region.contains(z));
    if admitted.is_empty() {
        return Err(CliError::EmptyRegion(format!(
            "no requested grid point lies in the admissible region |phase| < {}",
            region.max_phase
        )));
    }
    let opts = c.quadrature.expect("verify config carries options");
    let report = verify(&case, &admitted, c.tol, &opts);
    let kernel = kernel_checks(&case, &params, &admitted);
    let kernel_ok = kernel.as_ref().is_none_or(|k| k.passed);
    let verdict = if report.passed() && kernel_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };

    let mut csv = Table::new(vec![
        "modulus",
        "phase",
        "side",
        "term",
        "prefactor_re",
        "prefactor_im",
        "term_modulus",
        "term_phase",
        "value_re",
        "value_im",
        "error_estimate",
        "nodes_used",
        "sample_rel_residual",
        "sample_passed",
        "error",
    ]);
    for s in &report.samples {
        for t in &s.terms {
            csv.push(vec![
                format_f64(s.argument.modulus()),
                format_f64(s.argument.phase()),
                match t.side {
                    Side::Lhs => "lhs".into(),
                    Side::Rhs => "rhs".into(),
                },
                t.index.to_string(),
                format_f64(t.prefactor.re),
                format_f64(t.prefactor.im),
                format_f64(t.argument.modulus()),
                format_f64(t.argument.phase()),
                cell(t.value.map(|v| v.re)),
                cell(t.value.map(|v| v.im)),
                cell(t.error_estimate),
                t.nodes_used.to_string(),
                cell(s.rel_residual),
                s.passed.to_string(),
                t.error.clone().unwrap_or_default(),
            ]);
        }
    }

    let summary = format!(
        "verify {id}: {} ({} samples, {} excluded, worst relative residual {}{})",
        if verdict == Verdict::Pass { "pass" } else { "fail" },
        admitted.len(),
        excluded.len(),
        report
            .worst_rel_residual
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}")),
        kernel
            .as_ref()
            .map_or_else(String::new, |k| format!(", kernel {:.3e}", k.max_relative)),
    );
    let notes = case.notes();
    let json = render(
        c,
        VerifyBody {
            identity: id,
            verdict,
            notes,
            admissible_region: region,
            excluded,
            case: &case,
            verification: &report,
            kernel_checks: kernel,
        },
    );
    Ok(Outcome {
        json,
        csv,
        code: if verdict == Verdict::Pass {
            EXIT_OK
        } else {
            EXIT_NUMERICAL
        },
        summary,
    })
}

fn prepare_oracle(a: OracleArgs) -> RunConfig {
    let mut c = RunConfig::new(CommandKind::Oracle, &a.output, a.tol).with_grid(
        &a.grid,
        &crate::checks::ORACLE_MODULI,
        &crate::checks::ORACLE_PHASES,
    );
    c.quadrature = Some(QuadratureOptions::default());
    c
}

#[derive(Debug, Serialize)]
struct OracleBody<'a> {
    catalog: Vec<CatalogLine>,
    oracle: &'a OracleReport,
}

#[derive(Debug, Serialize)]
struct CatalogLine {
    name: &'static str,
    spec: HFunctionSpec,
}

fn run_oracle_cmd(c: &RunConfig) -> Result<Outcome, CliError> {
    let grid = c.grid().map_err(usage)?;
    let catalog = oracle_catalog();
    let opts = c.quadrature.expect("oracle config carries options");
    let report = run_oracle(&catalog, &grid, c.tol, &opts);
    let mut csv = Table::new(vec![
        "spec",
        "modulus",
        "phase",
        "contour_re",
        "contour_im",
        "series_re",
        "series_im",
        "rel_diff",
        "passed",
        "failure",
    ]);
    for r in &report.records {
        csv.push(vec![
            r.spec.to_string(),
            format_f64(r.argument.modulus()),
            format_f64(r.argument.phase()),
            cell(r.contour.map(|v| v.re)),
            cell(r.contour.map(|v| v.im)),
            cell(r.series.map(|v| v.re)),
            cell(r.series.map(|v| v.im)),
            cell(r.rel_diff),
            r.passed.to_string(),
            r.failure.clone().unwrap_or_default(),
        ]);
    }
    let summary = format!(
        "oracle: {} ({} comparisons, worst relative difference {})",
        if report.passed { "pass" } else { "fail" },
        report.records.len(),
        report
            .worst_rel_diff
            .map_or_else(|| "n/a".to_string(), |r| format!("{r:.3e}")),
    );
    let json = render(
        c,
        OracleBody {
            catalog: catalog
                .into_iter()
                .map(|e| CatalogLine {
                    name: e.name,
                    spec: e.spec,
                })
                .collect(),
            oracle: &report,
        },
    );
    Ok(Outcome {
        json,
        csv,
        code: if report.passed { EXIT_OK } else { EXIT_NUMERICAL },
        summary,
    })
}

fn prepare_gammacheck(a: GammaArgs) -> RunConfig {
    let mut c = RunConfig::new(CommandKind::Gammacheck, &a.output, crate::checks::GAMMA_TOL);
    c.count = Some(a.count);
    c.inject_fault = Some(a.inject_fault);
    c
}

fn run_gammacheck(c: &RunConfig) -> Outcome {
    let report: GammaSuiteReport = run_gamma_suite(GammaCheckConfig {
        seed: c.seed,
        count: c.count.unwrap_or(DEFAULT_GAMMA_SAMPLES),
        inject_fault: c.inject_fault.unwrap_or(false),
    });
    let mut csv = Table::new(vec!["check", "tolerance", "samples", "max_residual", "passed"]);
    for check in &report.checks {
        csv.push(vec![
            check.name.to_string(),
            format_f64(check.tolerance),
            check.samples.to_string(),
            format_f64(check.max_residual),
            check.passed.to_string(),
        ]);
        if !check.passed {
            for o in &check.worst {
                let inputs: Vec<String> = o.inputs.iter().map(|z| format!("{z}")).collect();
                eprintln!("{}: residual {:e} at {}", check.name, o.residual, inputs.join(", "));
            }
        }
    }
    let summary = format!(
        "gammacheck: {} ({} samples per check)",
        if report.passed { "pass" } else { "fail" },
        report.config.count
    );
    Outcome {
        json: render(c, &report),
        csv,
        code: if report.passed { EXIT_OK } else { EXIT_NUMERICAL },
        summary,
    }
}
