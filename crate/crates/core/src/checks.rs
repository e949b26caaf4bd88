//! Seeded self-checks: the gamma-function identity suite and the
//! contour-versus-series oracle comparison.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::evaluator::{evaluate_contour, evaluate_series, QuadratureOptions};
use crate::gammakit::{duplication_split, ln_gamma, phase_distance, reflection_cos, reflection_sin};
use crate::hspec::{Argument, HFunctionSpec, ParamPair, RawSpec};

pub const GAMMA_TOL: f64 = 1e-12;
pub const RECURRENCE_TOL: f64 = 1e-13;
/// Minimum distance between a sampled gamma argument and any pole.
pub const POLE_CLEARANCE: f64 = 0.05;
pub const DEFAULT_GAMMA_SAMPLES: usize = 1000;
const WORST_KEPT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaCheckConfig {
    pub seed: u64,
    pub count: usize,
    /// Test hook: perturbs one side of the sine reflection check by 1e-9.
    pub inject_fault: bool,
}

impl Default for GammaCheckConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            count: DEFAULT_GAMMA_SAMPLES,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offender {
    pub inputs: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    pub max_residual: f64,
    pub passed: bool,
    /// Largest residuals, descending.
    pub worst: Vec<Offender>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSuiteReport {
    pub config: GammaCheckConfig,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

fn distance_to_set(w: Complex64, nearest: impl Fn(f64) -> f64) -> f64 {
    (w - nearest(w.re)).norm()
}

fn clear_of_gamma_poles(w: Complex64) -> bool {
    distance_to_set(w, |x| x.round().min(0.0)) >= POLE_CLEARANCE
}

fn clear_of_integers(w: Complex64) -> bool {
    distance_to_set(w, f64::round) >= POLE_CLEARANCE
}

fn clear_of_half_integers(w: Complex64) -> bool {
    distance_to_set(w, |x| (x - 0.5).round() + 0.5) >= POLE_CLEARANCE
}

fn square_point(rng: &mut ChaCha8Rng, accept: impl Fn(Complex64) -> bool) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        if accept(z) {
            return z;
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn summarize(name: &'static str, tolerance: f64, mut rows: Vec<Offender>) -> CheckSummary {
    let samples = rows.len();
    rows.sort_by(|a, b| b.residual.total_cmp(&a.residual));
    let max_residual = rows.first().map_or(0.0, |r| r.residual);
    let passed = rows.iter().all(|r| r.residual <= tolerance);
    rows.truncate(WORST_KEPT);
    CheckSummary {
        name,
        tolerance,
        samples,
        max_residual,
        passed,
        worst: rows,
    }
}

fn relative(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

fn failed(inputs: Vec<Complex64>) -> Offender {
    Offender {
        inputs,
        residual: f64::INFINITY,
    }
}

fn check_sin(cfg: &GammaCheckConfig) -> CheckSummary {
    let mut rng = stream(cfg.seed, 1);
    let i = Complex64::i();
    let rows = (0..cfg.count)
        .map(|_| {
            let z = square_point(&mut rng, clear_of_integers);
            let direct = ((i * PI * z).exp() - (-i * PI * z).exp()) / (2.0 * i);
            match reflection_sin(z) {
                Ok(mut got) => {
                    if cfg.inject_fault {
                        got *= 1.0 + 1e-9;
                    }
                    Offender {
                        inputs: vec![z],
                        residual: relative(got, direct),
                    }
                }
                Err(_) => failed(vec![z]),
            }
        })
        .collect();
    summarize("reflection_sin", GAMMA_TOL, rows)
}

fn check_cos(cfg: &GammaCheckConfig) -> CheckSummary {
    let mut rng = stream(cfg.seed, 2);
    let i = Complex64::i();
    let rows = (0..cfg.count)
        .map(|_| {
            let z = square_point(&mut rng, clear_of_half_integers);
            let direct = ((i * PI * z).exp() + (-i * PI * z).exp()) / 2.0;
            match reflection_cos(z) {
                Ok(got) => Offender {
                    inputs: vec![z],
                    residual: relative(got, direct),
                },
                Err(_) => failed(vec![z]),
            }
        })
        .collect();
    summarize("reflection_cos", GAMMA_TOL, rows)
}

fn check_duplication(cfg: &GammaCheckConfig) -> CheckSummary {
    let mut rng = stream(cfg.seed, 3);
    let rows = (0..cfg.count)
        .map(|_| {
            let (beta, delta, s) = loop {
                let beta: f64 = rng.random_range(0.0..1.0);
                let delta: f64 = rng.random_range(0.1..1.0);
                let s = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-20.0..20.0));
                let x = beta - delta * s;
                let args = [x, 1.0 - x, 2.0 * x, 1.0 - 2.0 * x, 0.5 + x, 0.5 - x];
                if beta > 0.0 && args.iter().all(|&w| clear_of_gamma_poles(w)) {
                    break (beta, delta, s);
                }
            };
            let inputs = vec![Complex64::new(beta, 0.0), Complex64::new(delta, 0.0), s];
            match duplication_split(Complex64::new(beta, 0.0), delta, s) {
                Ok((lhs, rhs)) => Offender {
                    inputs,
                    residual: (lhs.log_modulus - rhs.log_modulus)
                        .abs()
                        .max(phase_distance(lhs.phase, rhs.phase)),
                },
                Err(_) => failed(inputs),
            }
        })
        .collect();
    summarize("duplication_split", GAMMA_TOL, rows)
}

fn check_recurrence(cfg: &GammaCheckConfig) -> CheckSummary {
    let mut rng = stream(cfg.seed, 4);
    let rows = (0..cfg.count)
        .map(|_| {
            let z = square_point(&mut rng, clear_of_gamma_poles);
            match (ln_gamma(z + 1.0), ln_gamma(z)) {
                (Ok(next), Ok(here)) => Offender {
                    inputs: vec![z],
                    residual: (next - here - z.ln()).norm() / next.norm().max(1.0),
                },
                _ => failed(vec![z]),
            }
        })
        .collect();
    summarize("log_gamma_recurrence", RECURRENCE_TOL, rows)
}

/// Runs the reflection, duplication and recurrence checks, `count` samples
/// each. Each check draws from its own ChaCha stream of `seed`.
pub fn run_gamma_suite(cfg: GammaCheckConfig) -> GammaSuiteReport {
    let checks = vec![
        check_sin(&cfg),
        check_cos(&cfg),
        check_duplication(&cfg),
        check_recurrence(&cfg),
    ];
    GammaSuiteReport {
        config: cfg,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: HFunctionSpec,
}

fn entry(name: &'static str, m: usize, n: usize, upper: &[(f64, f64, f64)], lower: &[(f64, f64, f64)]) -> CatalogEntry {
    let pairs = |list: &[(f64, f64, f64)]| {
        list.iter()
            .map(|&(re, im, w)| ParamPair::new(Complex64::new(re, im), w))
            .collect()
    };
    let spec = RawSpec::new(m, n, pairs(upper), pairs(lower))
        .validate()
        .expect("catalog specs are valid");
    assert!(spec.simple_poles(), "catalog spec {name} must have simple right poles");
    CatalogEntry { name, spec }
}

/// Specs with simple right poles whose residue series converges for
/// `|z| < 1`, used to cross-check the contour evaluator.
pub fn oracle_catalog() -> Vec<CatalogEntry> {
    vec![
        entry("h10_exp", 1, 0, &[], &[(0.0, 0.0, 1.0)]),
        entry("h10_weighted", 1, 0, &[], &[(0.5, 0.0, 2.0)]),
        entry("h11_geometric", 1, 1, &[(0.0, 0.0, 1.0)], &[(0.0, 0.0, 1.0)]),
        entry("h11_shifted", 1, 1, &[(0.2, 0.0, 1.0)], &[(0.5, 0.0, 1.0)]),
        entry("h11_weighted", 1, 1, &[(0.3, 0.0, 0.5)], &[(0.1, 0.0, 1.5)]),
        entry("h11_complex", 1, 1, &[(0.1, 0.2, 1.0)], &[(0.3, -0.1, 1.0)]),
        entry("h21_12", 2, 1, &[(0.2, 0.0, 1.0)], &[(0.0, 0.0, 1.0), (0.35, 0.0, 1.0)]),
        entry(
            "h21_12_weighted",
            2,
            1,
            &[(-0.3, 0.0, 0.7)],
            &[(0.1, 0.0, 1.0), (0.6, 0.0, 1.3)],
        ),
        entry(
            "h22_22",
            2,
            2,
            &[(0.0, 0.0, 1.0), (0.1, 0.0, 1.0)],
            &[(0.25, 0.0, 1.0), (0.6, 0.0, 1.0)],
        ),
        entry("h20_12", 2, 0, &[(0.5, 0.0, 1.0)], &[(0.0, 0.0, 1.0), (0.4, 0.0, 1.0)]),
    ]
}

pub const ORACLE_TOL: f64 = 1e-8;
pub const ORACLE_MODULI: [f64; 3] = [0.3, 0.5, 0.8];
pub const ORACLE_PHASES: [f64; 3] = [-0.2, 0.0, 0.2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRecord {
    pub spec: &'static str,
    pub argument: Argument,
    pub contour: Option<Complex64>,
    pub series: Option<Complex64>,
    pub rel_diff: Option<f64>,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub tolerance: f64,
    pub passed: bool,
    pub worst_rel_diff: Option<f64>,
    pub records: Vec<OracleRecord>,
}

/// Compares contour quadrature with the residue series at every
/// `(spec, argument)` pair. Records follow catalog order, then `arguments`.
pub fn run_oracle(
    catalog: &[CatalogEntry],
    arguments: &[Argument],
    tol: f64,
    opts: &QuadratureOptions,
) -> OracleReport {
    let jobs: Vec<(&CatalogEntry, Argument)> = catalog
        .iter()
        .flat_map(|e| arguments.iter().map(move |z| (e, *z)))
        .collect();
    let records: Vec<OracleRecord> = jobs
        .par_iter()
        .map(|(e, z)| {
            let contour = evaluate_contour(&e.spec, *z, opts);
            let series = evaluate_series(&e.spec, *z, opts);
            let mut record = OracleRecord {
                spec: e.name,
                argument: *z,
                contour: contour.as_ref().ok().map(|r| r.value),
                series: series.as_ref().ok().map(|r| r.value),
                rel_diff: None,
                passed: false,
                failure: None,
            };
            match (contour, series) {
                (Ok(c), Ok(s)) => {
                    let rel = (c.value - s.value).norm() / s.value.norm().max(crate::identities::RESIDUAL_FLOOR);
                    record.rel_diff = Some(rel);
                    record.passed = rel <= tol;
                    if !record.passed {
                        record.failure = Some(format!("relative difference {rel:e} exceeds {tol:e}"));
                    }
                }
                (Err(e), _) => record.failure = Some(format!("contour: {e}")),
                (_, Err(e)) => record.failure = Some(format!("series: {e}")),
            }
            record
        })
        .collect();
    OracleReport {
        tolerance: tol,
        passed: records.iter().all(|r| r.passed),
        worst_rel_diff: records
            .iter()
            .filter_map(|r| r.rel_diff)
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r)))),
        records,
    }
}
