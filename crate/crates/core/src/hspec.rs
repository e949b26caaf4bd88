//! H-function parameter specifications and their convergence geometry.
//!
//! A spec `H^{m,n}_{p,q}` carries an upper list of `p` pairs `(a_j, e_j)` and
//! a lower list of `q` pairs `(b_j, f_j)`. The first `m` lower pairs and the
//! first `n` upper pairs contribute numerator gammas of the Mellin-Barnes
//! kernel; the rest sit in the denominator.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Right poles closer than this are treated as coincident.
pub const POLE_COINCIDENCE_TOL: f64 = 1e-9;

/// How many poles per numerator family are scanned for coincidences.
const POLE_SCAN_DEPTH: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("index out of range: m={m}, n={n}, p={p}, q={q} (need m <= q and n <= p)")]
    IndexOutOfRange { m: usize, n: usize, p: usize, q: usize },
    #[error("{list} pair {index} has non-positive weight {weight}")]
    NonPositiveWeight { list: ListSide, index: usize, weight: f64 },
    #[error("{list} pair {index} has a non-finite entry")]
    NonFiniteParameter { list: ListSide, index: usize },
    #[error("no separating contour: left poles reach {c_min}, right poles start at {c_max}")]
    NoSeparatingContour { c_min: f64, c_max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ListSide {
    Upper,
    Lower,
}

impl fmt::Display for ListSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ListSide::Upper => "upper",
            ListSide::Lower => "lower",
        })
    }
}

/// One `(coefficient, weight)` pair: `(a_j, e_j)` or `(b_j, f_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPair {
    pub coeff: Complex64,
    pub weight: f64,
}

impl ParamPair {
    pub fn new(coeff: Complex64, weight: f64) -> Self {
        Self { coeff, weight }
    }

    pub fn real(coeff: f64, weight: f64) -> Self {
        Self::new(Complex64::new(coeff, 0.0), weight)
    }
}

impl Serialize for ParamPair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.coeff.re, self.coeff.im, self.weight].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParamPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [re, im, weight] = <[f64; 3]>::deserialize(deserializer)?;
        Ok(ParamPair::new(Complex64::new(re, im), weight))
    }
}

/// Unvalidated parameters, exactly as read from the JSON spec format
/// `{"m":int,"n":int,"upper":[[re,im,weight],...],"lower":[...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub m: usize,
    pub n: usize,
    pub upper: Vec<ParamPair>,
    pub lower: Vec<ParamPair>,
}

impl RawSpec {
    pub fn new(m: usize, n: usize, upper: Vec<ParamPair>, lower: Vec<ParamPair>) -> Self {
        Self { m, n, upper, lower }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization cannot fail")
    }

    /// Prepends `pair` to both lists inside the numerator ranges (m, n grow by one).
    pub fn prepend_numerator(mut self, pair: ParamPair) -> Self {
        self.upper.insert(0, pair);
        self.lower.insert(0, pair);
        self.m += 1;
        self.n += 1;
        self
    }

    /// Appends `pair` to both lists, past the numerator ranges.
    pub fn append_denominator(mut self, pair: ParamPair) -> Self {
        self.upper.push(pair);
        self.lower.push(pair);
        self
    }

    pub fn validate(self) -> Result<HFunctionSpec, SpecError> {
        validate(self)
    }
}

/// Admissible-contour geometry of a validated spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceProfile {
    pub a_star: f64,
    pub c_min: f64,
    pub c_max: f64,
    pub sector_halfwidth: f64,
}

impl ConvergenceProfile {
    /// Whether vertical-line quadrature converges at this phase, with `margin`
    /// kept clear of the sector edge.
    pub fn admits_phase(&self, phase: f64, margin: f64) -> bool {
        self.a_star > 0.0 && phase.abs() < self.sector_halfwidth - margin
    }
}

/// A validated H-function specification. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct HFunctionSpec {
    raw: RawSpec,
    profile: ConvergenceProfile,
    simple_poles: bool,
}

impl HFunctionSpec {
    pub fn m(&self) -> usize {
        self.raw.m
    }
    pub fn n(&self) -> usize {
        self.raw.n
    }
    pub fn p(&self) -> usize {
        self.raw.upper.len()
    }
    pub fn q(&self) -> usize {
        self.raw.lower.len()
    }
    pub fn upper(&self) -> &[ParamPair] {
        &self.raw.upper
    }
    pub fn lower(&self) -> &[ParamPair] {
        &self.raw.lower
    }
    pub fn raw(&self) -> &RawSpec {
        &self.raw
    }
    pub fn into_raw(self) -> RawSpec {
        self.raw
    }
    pub fn profile(&self) -> &ConvergenceProfile {
        &self.profile
    }

    /// False when two right poles coincide (within [`POLE_COINCIDENCE_TOL`]),
    /// which puts the residue series in the logarithmic case.
    pub fn simple_poles(&self) -> bool {
        self.simple_poles
    }

    /// Sum of all weights; the algebraic exponent used in truncation bounds.
    pub fn total_weight(&self) -> f64 {
        self.upper().iter().chain(self.lower()).map(|p| p.weight).sum()
    }

    pub fn to_json(&self) -> String {
        self.raw.to_json()
    }
}

impl fmt::Display for HFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H^{{{},{}}}_{{{},{}}}", self.m(), self.n(), self.p(), self.q())
    }
}

impl Serialize for HFunctionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.raw.serialize(serializer)
    }
}

pub fn validate(raw: RawSpec) -> Result<HFunctionSpec, SpecError> {
    let (m, n, p, q) = (raw.m, raw.n, raw.upper.len(), raw.lower.len());
    if m > q || n > p {
        return Err(SpecError::IndexOutOfRange { m, n, p, q });
    }
    for (list, pairs) in [(ListSide::Upper, &raw.upper), (ListSide::Lower, &raw.lower)] {
        for (index, pair) in pairs.iter().enumerate() {
            if !(pair.coeff.re.is_finite() && pair.coeff.im.is_finite() && pair.weight.is_finite()) {
                return Err(SpecError::NonFiniteParameter { list, index });
            }
            if pair.weight <= 0.0 {
                return Err(SpecError::NonPositiveWeight {
                    list,
                    index,
                    weight: pair.weight,
                });
            }
        }
    }

    let profile = compute_profile(&raw);
    if profile.c_min >= profile.c_max {
        return Err(SpecError::NoSeparatingContour {
            c_min: profile.c_min,
            c_max: profile.c_max,
        });
    }
    let simple_poles = right_poles_are_simple(&raw.lower[..m]);
    Ok(HFunctionSpec {
        raw,
        profile,
        simple_poles,
    })
}

pub fn convergence_profile(spec: &HFunctionSpec) -> ConvergenceProfile {
    spec.profile
}

fn compute_profile(raw: &RawSpec) -> ConvergenceProfile {
    let signed = |pairs: &[ParamPair], split: usize| -> f64 {
        pairs
            .iter()
            .enumerate()
            .map(|(j, pr)| if j < split { pr.weight } else { -pr.weight })
            .sum()
    };
    let a_star = signed(&raw.upper, raw.n) + signed(&raw.lower, raw.m);
    let c_min = raw.upper[..raw.n]
        .iter()
        .map(|pr| (pr.coeff.re - 1.0) / pr.weight)
        .fold(f64::NEG_INFINITY, f64::max);
    let c_max = raw.lower[..raw.m]
        .iter()
        .map(|pr| pr.coeff.re / pr.weight)
        .fold(f64::INFINITY, f64::min);
    ConvergenceProfile {
        a_star,
        c_min,
        c_max,
        sector_halfwidth: a_star * FRAC_PI_2,
    }
}

// Pole k of family j sits at (b_j + k)/f_j. For each pair of families,
// solve for the partner index l and test whether it lands on an integer.
fn right_poles_are_simple(numerator_lower: &[ParamPair]) -> bool {
    for (j, pj) in numerator_lower.iter().enumerate() {
        for pi in &numerator_lower[j + 1..] {
            for k in 0..POLE_SCAN_DEPTH {
                let s = (pj.coeff + k as f64) / pj.weight;
                let l = s * pi.weight - pi.coeff;
                let nearest = l.re.round();
                if nearest < 0.0 {
                    continue;
                }
                let gap = (Complex64::new(nearest, 0.0) - l).norm() / pi.weight;
                if gap <= POLE_COINCIDENCE_TOL {
                    return false;
                }
            }
        }
    }
    true
}

/// Poles of the numerator gammas nearest the contour strip.
///
/// Right poles come back in increasing real part, left poles in decreasing
/// real part (nearest the strip first).
pub fn pole_sets(spec: &HFunctionSpec, count: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut right: Vec<Complex64> = spec.lower()[..spec.m()]
        .iter()
        .flat_map(|pr| (0..count).map(move |k| (pr.coeff + k as f64) / pr.weight))
        .collect();
    let mut left: Vec<Complex64> = spec.upper()[..spec.n()]
        .iter()
        .flat_map(|pr| (0..count).map(move |k| (pr.coeff - 1.0 - k as f64) / pr.weight))
        .collect();
    let by_re = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
    right.sort_by(by_re);
    left.sort_by(|a, b| by_re(b, a));
    right.truncate(count);
    left.truncate(count);
    (right, left)
}

/// A point on the Riemann surface of the logarithm: `modulus * e^{i phase}`
/// with the phase kept unreduced, so rotations are exact phase additions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Argument {
    modulus: f64,
    phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("argument modulus must be positive and finite (got {modulus}, phase {phase})")]
pub struct ArgumentError {
    pub modulus: f64,
    pub phase: f64,
}

impl Argument {
    pub fn new(modulus: f64, phase: f64) -> Result<Self, ArgumentError> {
        if modulus > 0.0 && modulus.is_finite() && phase.is_finite() {
            Ok(Self { modulus, phase })
        } else {
            Err(ArgumentError { modulus, phase })
        }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// `ln z` on this sheet: `ln modulus + i phase`.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.modulus.ln(), self.phase)
    }

    /// `z^s = exp(s ln z)`.
    pub fn pow(&self, s: Complex64) -> Complex64 {
        (s * self.ln()).exp()
    }

    /// The projected complex number; loses the sheet.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }

    /// `z e^{i shift}`.
    pub fn rotated(&self, shift: f64) -> Self {
        Self {
            modulus: self.modulus,
            phase: self.phase + shift,
        }
    }
}
