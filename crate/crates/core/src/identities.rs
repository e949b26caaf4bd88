//! Weighted H-function identities and their numerical verification.
//!
//! Each identity is a pair of sums of [`WeightedTerm`]s. A term is
//! `prefactor · H[spec](z · e^{i phase_shift})`. Identities are checked two
//! ways: after quadrature ([`verify`]) and pointwise on the integrands, where
//! no quadrature error can interfere ([`integrand_residual`],
//! [`kernel_residual`]).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::{evaluate_contour, strip_window, QuadratureOptions, SECTOR_MARGIN};
use crate::gammakit::{log_gamma, GammaError, LogComplex};
use crate::hspec::{Argument, HFunctionSpec, ParamPair, RawSpec, SpecError};
use crate::mellin::{integrand, MellinError};

/// Residuals are measured relative to `max(|lhs|, RESIDUAL_FLOOR)`.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Carried in reports for G43.
pub const G43_SUPERSCRIPT_NOTE: &str = "G43 left side is built as H^{m+1,n+1}_{p+1,q+1}: \
prepending (beta,delta) to both numerator ranges raises m and n by one, although the \
printed form of this identity shows H^{m,n}_{p+1,q+1}.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityId {
    R1981,
    #[serde(rename = "RMULTI")]
    Rmulti,
    #[serde(rename = "MAIN")]
    Main,
    G41,
    G42,
    G43,
}

impl IdentityId {
    pub const ALL: [IdentityId; 6] = [
        IdentityId::R1981,
        IdentityId::Rmulti,
        IdentityId::Main,
        IdentityId::G41,
        IdentityId::G42,
        IdentityId::G43,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityId::R1981 => "R1981",
            IdentityId::Rmulti => "RMULTI",
            IdentityId::Main => "MAIN",
            IdentityId::G41 => "G41",
            IdentityId::G42 => "G42",
            IdentityId::G43 => "G43",
        }
    }

    /// (lhs, rhs) term counts.
    pub fn term_counts(&self) -> (usize, usize) {
        match self {
            IdentityId::R1981 | IdentityId::Rmulti => (1, 2),
            IdentityId::Main => (1, 4),
            IdentityId::G41 | IdentityId::G42 | IdentityId::G43 => (1, 1),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown identity id {0:?} (expected one of R1981, RMULTI, MAIN, G41, G42, G43)")]
pub struct UnknownIdentity(pub String);

impl FromStr for IdentityId {
    type Err = UnknownIdentity;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| UnknownIdentity(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("invalid identity parameters: {0}")]
    InvalidParams(String),
    #[error("{side} term {index} does not validate: {source}")]
    SpecValidationFailed {
        side: Side,
        index: usize,
        source: SpecError,
    },
    #[error("no base phase is admissible for vertical-contour quadrature (best bound {max_phase})")]
    EmptyAdmissibleRegion { max_phase: f64 },
    #[error("s = {s} hits a gamma pole")]
    PoleAtS { s: Complex64 },
    #[error(transparent)]
    Kernel(MellinError),
}

/// The scalar parameters of an identity plus its base parameter lists.
///
/// MAIN and G41 use all four scalars; R1981, RMULTI and G42 use
/// `(alpha, lambda)`; G43 uses `(beta, delta)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub delta: f64,
    pub base: HFunctionSpec,
}

impl IdentityParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64, delta: f64, base: HFunctionSpec) -> Self {
        Self {
            alpha,
            beta,
            lambda,
            delta,
            base,
        }
    }

    fn check(&self, id: IdentityId) -> Result<(), IdentityError> {
        let scalars = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("lambda", self.lambda),
            ("delta", self.delta),
        ];
        if let Some((name, v)) = scalars.iter().find(|(_, v)| !v.is_finite()) {
            return Err(IdentityError::InvalidParams(format!("{name} = {v} is not finite")));
        }
        if self.lambda < 0.0 || self.delta < 0.0 {
            return Err(IdentityError::InvalidParams(format!(
                "lambda and delta must be non-negative (lambda = {}, delta = {})",
                self.lambda, self.delta
            )));
        }
        let need_lambda = matches!(
            id,
            IdentityId::Main | IdentityId::G41 | IdentityId::R1981 | IdentityId::Rmulti | IdentityId::G42
        );
        let need_delta = matches!(id, IdentityId::Main | IdentityId::G41 | IdentityId::G43);
        if need_lambda && self.lambda <= 0.0 {
            return Err(IdentityError::InvalidParams(format!("{id} needs lambda > 0")));
        }
        if need_delta && self.delta <= 0.0 {
            return Err(IdentityError::InvalidParams(format!("{id} needs delta > 0")));
        }
        Ok(())
    }
}

/// `prefactor · H[spec](z e^{i phase_shift})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedTerm {
    pub prefactor: Complex64,
    pub spec: HFunctionSpec,
    pub phase_shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCase {
    pub id: IdentityId,
    pub lhs: Vec<WeightedTerm>,
    pub rhs: Vec<WeightedTerm>,
}

impl IdentityCase {
    pub fn terms(&self) -> impl Iterator<Item = (Side, usize, &WeightedTerm)> {
        let lhs = self.lhs.iter().enumerate().map(|(i, t)| (Side::Lhs, i, t));
        let rhs = self.rhs.iter().enumerate().map(|(i, t)| (Side::Rhs, i, t));
        lhs.chain(rhs)
    }

    /// Intersection of all term strips (unbounded sides replaced by the
    /// evaluator's finite window). `None` if empty.
    pub fn common_strip(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self
            .terms()
            .map(|(_, _, t)| strip_window(t.spec.profile()))
            .fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), (a, b)| {
                (lo.max(a), hi.min(b))
            });
        (lo < hi).then_some((lo, hi))
    }

    pub fn notes(&self) -> Vec<&'static str> {
        match self.id {
            IdentityId::G43 => vec![G43_SUPERSCRIPT_NOTE],
            _ => vec![],
        }
    }
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn real_pair(coeff: f64, weight: f64) -> ParamPair {
    ParamPair::real(coeff, weight)
}

fn finish(
    id: IdentityId,
    lhs: Vec<(Complex64, RawSpec, f64)>,
    rhs: Vec<(Complex64, RawSpec, f64)>,
) -> Result<IdentityCase, IdentityError> {
    let build = |side: Side, terms: Vec<(Complex64, RawSpec, f64)>| {
        terms
            .into_iter()
            .enumerate()
            .map(|(index, (prefactor, raw, phase_shift))| {
                let spec =
                    raw.validate()
                        .map_err(|source| IdentityError::SpecValidationFailed { side, index, source })?;
                Ok(WeightedTerm {
                    prefactor,
                    spec,
                    phase_shift,
                })
            })
            .collect::<Result<Vec<_>, IdentityError>>()
    };
    Ok(IdentityCase {
        id,
        lhs: build(Side::Lhs, lhs)?,
        rhs: build(Side::Rhs, rhs)?,
    })
}

/// Left-side spec of MAIN (also G41): `(β,δ)` prepended to both lists,
/// `(α,λ)` appended to both.
pub fn main_lhs_spec(params: &IdentityParams) -> RawSpec {
    params
        .base
        .raw()
        .clone()
        .prepend_numerator(real_pair(params.beta, params.delta))
        .append_denominator(real_pair(params.alpha, params.lambda))
}

pub fn build_identity(id: IdentityId, params: &IdentityParams) -> Result<IdentityCase, IdentityError> {
    params.check(id)?;
    let IdentityParams {
        alpha,
        beta,
        lambda,
        delta,
        ..
    } = *params;
    let base = || params.base.raw().clone();
    let one = Complex64::new(1.0, 0.0);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);

    match id {
        IdentityId::Main => {
            let doubled = base().prepend_numerator(real_pair(2.0 * beta, 2.0 * delta));
            let sum = alpha + beta;
            let diff = alpha - beta;
            let rhs = vec![
                (cis(PI * sum), doubled.clone(), -PI * (lambda + delta)),
                (cis(PI * diff), doubled.clone(), -PI * (lambda - delta)),
                (-cis(-PI * diff), doubled.clone(), PI * (lambda - delta)),
                (-cis(-PI * sum), doubled, PI * (lambda + delta)),
            ];
            finish(id, vec![(two_pi_i, main_lhs_spec(params), 0.0)], rhs)
        }
        IdentityId::R1981 => {
            let lhs = base().append_denominator(real_pair(alpha, lambda));
            let rhs = vec![
                (cis(PI * alpha) / two_pi_i, base(), -PI * lambda),
                (-cis(-PI * alpha) / two_pi_i, base(), PI * lambda),
            ];
            finish(id, vec![(one, lhs, 0.0)], rhs)
        }
        IdentityId::Rmulti => {
            let lhs = base().prepend_numerator(real_pair(alpha, lambda));
            let doubled = base().prepend_numerator(real_pair(2.0 * alpha, 2.0 * lambda));
            let rhs = vec![
                (cis(PI * alpha), doubled.clone(), -PI * lambda),
                (cis(-PI * alpha), doubled, PI * lambda),
            ];
            finish(id, vec![(one, lhs, 0.0)], rhs)
        }
        IdentityId::G41 => {
            let rhs = base()
                .prepend_numerator(real_pair(0.5 + alpha, lambda))
                .prepend_numerator(real_pair(2.0 * beta, 2.0 * delta))
                .append_denominator(real_pair(2.0 * alpha, 2.0 * lambda))
                .append_denominator(real_pair(0.5 + beta, delta));
            finish(id, vec![(one, main_lhs_spec(params), 0.0)], vec![(one, rhs, 0.0)])
        }
        IdentityId::G42 => {
            let lhs = base().append_denominator(real_pair(alpha, lambda));
            let rhs = base()
                .prepend_numerator(real_pair(0.5 + alpha, lambda))
                .append_denominator(real_pair(2.0 * alpha, 2.0 * lambda));
            finish(
                id,
                vec![(one, lhs, 0.0)],
                vec![(Complex64::new(1.0 / (2.0 * PI), 0.0), rhs, 0.0)],
            )
        }
        IdentityId::G43 => {
            let lhs = base().prepend_numerator(real_pair(beta, delta));
            let rhs = base()
                .prepend_numerator(real_pair(2.0 * beta, 2.0 * delta))
                .append_denominator(real_pair(0.5 + beta, delta));
            finish(
                id,
                vec![(one, lhs, 0.0)],
                vec![(Complex64::new(2.0 * PI, 0.0), rhs, 0.0)],
            )
        }
    }
}

/// Where every term of a case can be evaluated by vertical-line quadrature.
///
/// Vertical contours converge for every modulus once `a* > 0`, so the modulus
/// range is `(0, ∞)`; only the phase band is restrictive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleRegion {
    pub max_phase: f64,
    pub min_modulus: f64,
    #[serde(serialize_with = "serialize_unbounded")]
    pub max_modulus: f64,
}

fn serialize_unbounded<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

impl AdmissibleRegion {
    pub fn contains(&self, z: &Argument) -> bool {
        z.phase().abs() < self.max_phase && z.modulus() > self.min_modulus && z.modulus() < self.max_modulus
    }
}

/// Largest `φ` such that every term, rotated by its shift, satisfies
/// `|φ + shift| < sector_halfwidth - margin` for all `|base phase| < φ`.
pub fn admissible_sector(case: &IdentityCase) -> Result<AdmissibleRegion, IdentityError> {
    let max_phase = case
        .terms()
        .map(|(_, _, t)| t.spec.profile().sector_halfwidth - SECTOR_MARGIN - t.phase_shift.abs())
        .fold(f64::INFINITY, f64::min);
    if max_phase <= 0.0 {
        return Err(IdentityError::EmptyAdmissibleRegion { max_phase });
    }
    Ok(AdmissibleRegion {
        max_phase,
        min_modulus: 0.0,
        max_modulus: f64::INFINITY,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRecord {
    pub side: Side,
    pub index: usize,
    pub prefactor: Complex64,
    pub argument: Argument,
    pub value: Option<Complex64>,
    pub error_estimate: Option<f64>,
    pub nodes_used: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub argument: Argument,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub lhs_error_estimate: Option<f64>,
    pub rhs_error_estimate: Option<f64>,
    pub passed: bool,
    pub failure: Option<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identity: IdentityId,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub worst_rel_residual: Option<f64>,
    pub samples: Vec<SampleRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Evaluates both sides at every sample and compares them.
///
/// A sample passes iff `|lhs - rhs| / max(|lhs|, RESIDUAL_FLOOR) <= tol`.
/// Evaluator failures fail the sample and are recorded; the run continues.
/// Samples are processed in parallel; record order follows `samples`.
pub fn verify(case: &IdentityCase, samples: &[Argument], tol: f64, opts: &QuadratureOptions) -> VerificationReport {
    let records: Vec<SampleRecord> = samples.par_iter().map(|z| verify_sample(case, *z, tol, opts)).collect();
    let verdict = if records.iter().all(|r| r.passed) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let worst_rel_residual = records
        .iter()
        .filter_map(|r| r.rel_residual)
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))));
    VerificationReport {
        identity: case.id,
        tolerance: tol,
        verdict,
        worst_rel_residual,
        samples: records,
    }
}

fn verify_sample(case: &IdentityCase, z: Argument, tol: f64, opts: &QuadratureOptions) -> SampleRecord {
    let terms: Vec<TermRecord> = case
        .terms()
        .map(|(side, index, term)| {
            let argument = z.rotated(term.phase_shift);
            let result = evaluate_contour(&term.spec, argument, opts);
            let (value, error_estimate, nodes_used, error) = match result {
                Ok(r) => (
                    Some(term.prefactor * r.value),
                    Some(term.prefactor.norm() * r.error_estimate),
                    r.nodes_used,
                    None,
                ),
                Err(e) => (None, None, 0, Some(e.to_string())),
            };
            TermRecord {
                side,
                index,
                prefactor: term.prefactor,
                argument,
                value,
                error_estimate,
                nodes_used,
                error,
            }
        })
        .collect();

    let side_total = |side: Side| -> Option<(Complex64, f64)> {
        terms
            .iter()
            .filter(|t| t.side == side)
            .try_fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), t| {
                Some((v + t.value?, e + t.error_estimate?))
            })
    };
    let lhs = side_total(Side::Lhs);
    let rhs = side_total(Side::Rhs);

    let mut record = SampleRecord {
        argument: z,
        lhs: lhs.map(|x| x.0),
        rhs: rhs.map(|x| x.0),
        abs_residual: None,
        rel_residual: None,
        lhs_error_estimate: lhs.map(|x| x.1),
        rhs_error_estimate: rhs.map(|x| x.1),
        passed: false,
        failure: None,
        terms,
    };
    match (lhs, rhs) {
        (Some((l, _)), Some((r, _))) => {
            let abs = (l - r).norm();
            let rel = abs / l.norm().max(RESIDUAL_FLOOR);
            record.abs_residual = Some(abs);
            record.rel_residual = Some(rel);
            record.passed = rel <= tol;
            if !record.passed {
                record.failure = Some(format!("relative residual {rel:e} exceeds {tol:e}"));
            }
        }
        _ => {
            let first = record
                .terms
                .iter()
                .find_map(|t| t.error.as_ref().map(|e| format!("{} term {}: {}", t.side, t.index, e)));
            record.failure = first;
        }
    }
    record
}

/// Two values compared after factoring out a shared scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `lhs - rhs`.
    pub residual: Complex64,
    /// `|lhs - rhs| / max(|lhs|, |rhs|)`, computed before rescaling back.
    pub relative: f64,
}

impl PointwiseResidual {
    fn from_scaled(lhs: (f64, Complex64), rhs: (f64, Complex64)) -> Self {
        let shift = lhs.0.max(rhs.0);
        let a = lhs.1 * (lhs.0 - shift).exp();
        let b = rhs.1 * (rhs.0 - shift).exp();
        let denom = a.norm().max(b.norm());
        let relative = if denom == 0.0 { 0.0 } else { (a - b).norm() / denom };
        let scale = shift.exp();
        PointwiseResidual {
            lhs: a * scale,
            rhs: b * scale,
            residual: (a - b) * scale,
            relative,
        }
    }
}

// Σ c_k · exp(w_k) as (shift, mantissa) with mantissa = Σ c_k exp(w_k - shift).
fn scaled_sum(parts: &[(Complex64, LogComplex)]) -> (f64, Complex64) {
    let shift = parts
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(_, v)| v.log_modulus)
        .fold(f64::NEG_INFINITY, f64::max);
    if shift == f64::NEG_INFINITY {
        return (0.0, Complex64::new(0.0, 0.0));
    }
    let mantissa = parts.iter().map(|(c, v)| c * v.to_complex_scaled(shift)).sum();
    (shift, mantissa)
}

fn pole_at(s: Complex64) -> impl Fn(GammaError) -> IdentityError {
    move |_| IdentityError::PoleAtS { s }
}

fn kernel_err(s: Complex64) -> impl Fn(MellinError) -> IdentityError {
    move |e| match e {
        MellinError::PoleOfNumerator { .. } => IdentityError::PoleAtS { s },
        other => IdentityError::Kernel(other),
    }
}

/// Pointwise check of the integrand rearrangement behind MAIN.
///
/// `A = 2πi θ_L(s) z^s`, where `θ_L` is the kernel of the MAIN left-side
/// spec, is compared with
///
/// ```text
/// B = θ(s) z^s Γ(2β-2δs) Γ(1-2β+2δs)
///     · ( e^{iπ(α+β-(λ+δ)s)} + e^{iπ(α-β-(λ-δ)s)}
///       - e^{-iπ(α-β-(λ-δ)s)} - e^{-iπ(α+β-(λ+δ)s)} )
/// ```
///
/// with `θ` the base kernel. `B` is assembled from the base kernel and the
/// explicit gamma and exponential factors, independently of the padded spec.
pub fn integrand_residual(
    params: &IdentityParams,
    z: Argument,
    s: Complex64,
) -> Result<PointwiseResidual, IdentityError> {
    params.check(IdentityId::Main)?;
    let IdentityParams {
        alpha,
        beta,
        lambda,
        delta,
        ..
    } = *params;

    let doubled = log_gamma(Complex64::new(2.0 * beta, 0.0) - 2.0 * delta * s).map_err(pole_at(s))?;
    let doubled_c = log_gamma(1.0 - 2.0 * beta + 2.0 * delta * s).map_err(pole_at(s))?;
    let base = integrand(&params.base, z, s).map_err(kernel_err(s))?;
    let common = base * doubled * doubled_c;

    let i_pi = Complex64::new(0.0, PI);
    let sum_arg = alpha + beta - (lambda + delta) * s;
    let diff_arg = alpha - beta - (lambda - delta) * s;
    let one = Complex64::new(1.0, 0.0);
    let rhs = scaled_sum(&[
        (one, common.mul_exp(i_pi * sum_arg)),
        (one, common.mul_exp(i_pi * diff_arg)),
        (-one, common.mul_exp(-i_pi * diff_arg)),
        (-one, common.mul_exp(-i_pi * sum_arg)),
    ]);

    let lhs_spec = main_lhs_spec(params)
        .validate()
        .map_err(|source| IdentityError::SpecValidationFailed {
            side: Side::Lhs,
            index: 0,
            source,
        })?;
    let lhs_val = integrand(&lhs_spec, z, s).map_err(kernel_err(s))?;
    let lhs = scaled_sum(&[(Complex64::new(0.0, 2.0 * PI), lhs_val)]);

    Ok(PointwiseResidual::from_scaled(lhs, rhs))
}

/// Pointwise integrand-level comparison of the two sides of any case:
/// `Σ prefactor · θ_spec(s) · (z e^{i shift})^s` on each side.
///
/// Because both sides integrate over the same vertical line, equality of these
/// integrands at every `s` implies the identity without quadrature.
pub fn kernel_residual(case: &IdentityCase, z: Argument, s: Complex64) -> Result<PointwiseResidual, IdentityError> {
    let side = |terms: &[WeightedTerm]| -> Result<(f64, Complex64), IdentityError> {
        let parts = terms
            .iter()
            .map(|t| {
                integrand(&t.spec, z.rotated(t.phase_shift), s)
                    .map(|v| (t.prefactor, v))
                    .map_err(kernel_err(s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(scaled_sum(&parts))
    };
    Ok(PointwiseResidual::from_scaled(side(&case.lhs)?, side(&case.rhs)?))
}

/// 5 × 5 grid: real parts across the middle third of `strip`, imaginary
/// parts evenly over `[-10, 10]`.
pub fn strip_grid(strip: (f64, f64)) -> Vec<Complex64> {
    let (lo, hi) = strip;
    let width = hi - lo;
    let mut grid = Vec::with_capacity(25);
    for i in 0..5 {
        let re = lo + width * (1.0 / 3.0 + (1.0 / 3.0) * i as f64 / 4.0);
        for j in 0..5 {
            grid.push(Complex64::new(re, -10.0 + 5.0 * j as f64));
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h11() -> HFunctionSpec {
        RawSpec::new(1, 1, vec![real_pair(0.0, 1.0)], vec![real_pair(0.0, 1.0)])
            .validate()
            .unwrap()
    }

    fn h10() -> HFunctionSpec {
        RawSpec::new(1, 0, vec![], vec![real_pair(0.0, 1.0)])
            .validate()
            .unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn ids_round_trip_through_strings() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
        }
        assert!("MAINX".parse::<IdentityId>().is_err());
    }

    #[test]
    fn main_structure_matches_example() {
        let params = IdentityParams::new(0.3, 0.2, 0.5, 0.4, h11());
        let case = build_identity(IdentityId::Main, &params).unwrap();
        assert_eq!((case.lhs.len(), case.rhs.len()), (1, 4));
        assert!(close(case.lhs[0].prefactor, Complex64::new(0.0, 2.0 * PI)));
        let want_prefactors = [cis(0.5 * PI), cis(0.1 * PI), -cis(-0.1 * PI), -cis(-0.5 * PI)];
        let want_shifts = [-0.9 * PI, -0.1 * PI, 0.1 * PI, 0.9 * PI];
        for (k, term) in case.rhs.iter().enumerate() {
            assert!(close(term.prefactor, want_prefactors[k]), "prefactor {k}");
            assert!((term.phase_shift - want_shifts[k]).abs() < 1e-14, "shift {k}");
            let pad = term.spec.upper()[0];
            assert!((pad.coeff.re - 0.4).abs() < 1e-15 && (pad.weight - 0.8).abs() < 1e-15);
            assert_eq!(term.spec.lower()[0], pad);
            assert_eq!((term.spec.m(), term.spec.n()), (2, 2));
        }
        let lhs = &case.lhs[0].spec;
        assert_eq!((lhs.m(), lhs.n(), lhs.p(), lhs.q()), (2, 2, 3, 3));
        assert_eq!(lhs.upper()[0], real_pair(0.2, 0.4));
        assert_eq!(lhs.upper()[2], real_pair(0.3, 0.5));
        assert_eq!(lhs.lower()[2], real_pair(0.3, 0.5));
        assert!(case.lhs.iter().all(|t| t.phase_shift == 0.0));
    }

    #[test]
    fn r1981_has_opposite_sign_prefactors_with_inverse_two_pi_i() {
        let params = IdentityParams::new(0.35, 0.0, 0.25, 0.0, h10());
        let case = build_identity(IdentityId::R1981, &params).unwrap();
        assert_eq!(case.rhs.len(), 2);
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        assert!(close(case.rhs[0].prefactor * two_pi_i, cis(0.35 * PI)));
        assert!(close(case.rhs[1].prefactor * two_pi_i, -cis(-0.35 * PI)));
        assert_eq!(case.rhs[0].spec, h10());
        assert_eq!(case.rhs[0].phase_shift, -0.25 * PI);
        assert_eq!(case.rhs[1].phase_shift, 0.25 * PI);
    }

    #[test]
    fn g41_list_layout() {
        let params = IdentityParams::new(0.3, 0.3, 0.45, 0.45, h11());
        let case = build_identity(IdentityId::G41, &params).unwrap();
        let rhs = &case.rhs[0].spec;
        assert_eq!((rhs.m(), rhs.n(), rhs.p(), rhs.q()), (3, 3, 5, 5));
        let want = [
            real_pair(0.6, 0.9),
            real_pair(0.8, 0.45),
            real_pair(0.0, 1.0),
            real_pair(0.6, 0.9),
            real_pair(0.8, 0.45),
        ];
        assert_eq!(rhs.upper(), &want);
        assert_eq!(rhs.lower(), &want);
    }

    #[test]
    fn g42_and_g43_constants() {
        let case = build_identity(IdentityId::G42, &IdentityParams::new(0.2, 0.0, 0.5, 0.0, h11())).unwrap();
        assert!(close(case.rhs[0].prefactor, Complex64::new(1.0 / (2.0 * PI), 0.0)));
        let case = build_identity(IdentityId::G43, &IdentityParams::new(0.0, 0.3, 0.0, 0.5, h11())).unwrap();
        assert!(close(case.rhs[0].prefactor, Complex64::new(2.0 * PI, 0.0)));
        let lhs = &case.lhs[0].spec;
        assert_eq!((lhs.m(), lhs.n(), lhs.p(), lhs.q()), (2, 2, 2, 2));
        assert_eq!(case.notes(), vec![G43_SUPERSCRIPT_NOTE]);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let zero_delta = IdentityParams::new(0.3, 0.2, 0.5, 0.0, h11());
        assert!(matches!(
            build_identity(IdentityId::Main, &zero_delta),
            Err(IdentityError::InvalidParams(_))
        ));
        assert!(build_identity(IdentityId::R1981, &zero_delta).is_ok());
        let zero_lambda = IdentityParams::new(0.3, 0.2, 0.0, 0.5, h11());
        assert!(build_identity(IdentityId::G43, &zero_lambda).is_ok());
        assert!(matches!(
            build_identity(IdentityId::Rmulti, &zero_lambda),
            Err(IdentityError::InvalidParams(_))
        ));
        let nan = IdentityParams::new(f64::NAN, 0.2, 0.5, 0.5, h11());
        assert!(matches!(
            build_identity(IdentityId::Main, &nan),
            Err(IdentityError::InvalidParams(_))
        ));
    }

    #[test]
    fn padding_that_closes_the_strip_fails_validation() {
        // (2β-1)/(2δ) = 0.5 >= c_max = 0 for the doubled pad
        let params = IdentityParams::new(0.3, 0.7, 0.5, 0.2, h11());
        assert!(matches!(
            build_identity(IdentityId::Main, &params),
            Err(IdentityError::SpecValidationFailed { side: Side::Rhs, .. })
        ));
    }

    #[test]
    fn admissible_sector_examples() {
        let case = build_identity(IdentityId::Main, &IdentityParams::new(0.3, 0.2, 0.1, 0.1, h11())).unwrap();
        let region = admissible_sector(&case).unwrap();
        assert!((region.max_phase - (PI - SECTOR_MARGIN)).abs() < 1e-12);

        let case = build_identity(IdentityId::Main, &IdentityParams::new(0.3, 0.2, 1.5, 0.4, h11())).unwrap();
        assert!(matches!(
            admissible_sector(&case),
            Err(IdentityError::EmptyAdmissibleRegion { .. })
        ));

        let case = build_identity(IdentityId::R1981, &IdentityParams::new(0.3, 0.0, 0.25, 0.0, h10())).unwrap();
        let region = admissible_sector(&case).unwrap();
        assert!((region.max_phase - (0.25 * PI - SECTOR_MARGIN)).abs() < 1e-12);
        assert!(region.contains(&Argument::new(3.0, 0.2 * PI).unwrap()));
        assert!(!region.contains(&Argument::new(3.0, -0.26 * PI).unwrap()));
    }

    #[test]
    fn integrand_residual_main_example() {
        let params = IdentityParams::new(0.3, 0.2, 0.5, 0.4, h11());
        let z = Argument::new(0.7, 0.0).unwrap();
        let r = integrand_residual(&params, z, Complex64::new(-0.5, 2.0)).unwrap();
        assert!(r.relative <= 1e-10, "{r:?}");
        assert!(r.lhs.norm() > 0.0);
    }

    #[test]
    fn integrand_residual_symmetric_parameters() {
        // α = β, λ = δ: the middle exponentials cancel and
        // B = 2i sin(2π(α-λs)) θ z^s Γ(2α-2λs) Γ(1-2α+2λs)
        let (a, l) = (0.3, 0.4);
        let params = IdentityParams::new(a, a, l, l, h11());
        let z = Argument::new(0.9, 0.1).unwrap();
        let s = Complex64::new(-0.3, 1.3);
        let r = integrand_residual(&params, z, s).unwrap();
        let x = a - l * s;
        let i = Complex64::i();
        let sin = ((i * 2.0 * PI * x).exp() - (-i * 2.0 * PI * x).exp()) / (2.0 * i);
        let g = log_gamma(2.0 * x).unwrap() * log_gamma(1.0 - 2.0 * x).unwrap();
        let direct = 2.0 * i * sin * integrand(&h11(), z, s).unwrap().to_complex() * g.to_complex();
        assert!((r.rhs - direct).norm() <= 1e-12 * direct.norm());
        assert!(r.relative <= 1e-10);
    }

    #[test]
    fn integrand_residual_pole() {
        // 2β - 2δs = 0 at s = β/δ
        let params = IdentityParams::new(0.3, 0.2, 0.5, 0.4, h11());
        let z = Argument::new(0.7, 0.0).unwrap();
        assert!(matches!(
            integrand_residual(&params, z, Complex64::new(0.5, 0.0)),
            Err(IdentityError::PoleAtS { .. })
        ));
    }

    #[test]
    fn kernel_residual_detects_a_wrong_sign() {
        let params = IdentityParams::new(0.3, 0.2, 0.5, 0.4, h11());
        let mut case = build_identity(IdentityId::Main, &params).unwrap();
        let z = Argument::new(0.7, 0.0).unwrap();
        let s = Complex64::new(-0.2, 3.0);
        assert!(kernel_residual(&case, z, s).unwrap().relative < 1e-11);
        case.rhs[1].prefactor = -case.rhs[1].prefactor;
        assert!(kernel_residual(&case, z, s).unwrap().relative > 1e-3);
    }

    #[test]
    fn empty_sample_list_passes_vacuously() {
        let case = build_identity(IdentityId::R1981, &IdentityParams::new(0.3, 0.0, 0.25, 0.0, h10())).unwrap();
        let report = verify(&case, &[], 1e-6, &QuadratureOptions::default());
        assert!(report.passed());
        assert!(report.samples.is_empty());
        assert_eq!(report.worst_rel_residual, None);
    }

    #[test]
    fn sample_outside_sector_fails_but_run_continues() {
        let case = build_identity(IdentityId::R1981, &IdentityParams::new(0.3, 0.0, 0.25, 0.0, h10())).unwrap();
        let samples = [Argument::new(0.5, 0.0).unwrap(), Argument::new(0.5, 0.3 * PI).unwrap()];
        let report = verify(&case, &samples, 1e-6, &QuadratureOptions::default());
        assert_eq!(report.verdict, Verdict::Fail);
        assert!(report.samples[0].passed, "{:?}", report.samples[0]);
        assert!(!report.samples[1].passed);
        assert!(report.samples[1].failure.as_deref().unwrap().contains("sector"));
    }

    #[test]
    fn strip_grid_layout() {
        let g = strip_grid((-1.0, 0.5));
        assert_eq!(g.len(), 25);
        assert!((g[0].re + 0.5).abs() < 1e-15 && g[0].im == -10.0);
        assert!((g[24].re - 0.0).abs() < 1e-15 && g[24].im == 10.0);
    }
}
