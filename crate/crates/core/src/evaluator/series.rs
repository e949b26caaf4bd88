use std::f64::consts::PI;

use num_complex::Complex64;

use super::{EvalError, EvalResult, Method, QuadratureOptions};
use crate::gammakit::{log_gamma, LogComplex};
use crate::hspec::{Argument, HFunctionSpec};
use crate::mellin::theta_excluding;

/// Per-family cap on residue terms.
pub const MAX_SERIES_TERMS: usize = 2000;

/// Consecutive negligible terms required before stopping.
const QUIET_TERMS: usize = 3;

/// Sum of residues at the right poles `s_jk = (b_j + k)/f_j`:
///
/// `H = Σ_j Σ_k (-1)^k / (k! f_j) · θ_j(s_jk) · z^{s_jk}`
///
/// where `θ_j` is θ without its `Γ(b_j - f_j s)` factor.
pub fn evaluate_series(spec: &HFunctionSpec, z: Argument, opts: &QuadratureOptions) -> Result<EvalResult, EvalError> {
    opts.check()?;
    if !spec.simple_poles() {
        return Err(EvalError::LogarithmicCase);
    }
    let ln_z = z.ln();
    let families = &spec.lower()[..spec.m()];

    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0usize;
    let mut recent = [0.0f64; QUIET_TERMS];
    for k in 0..MAX_SERIES_TERMS {
        let ln_factorial = log_gamma(Complex64::new(k as f64 + 1.0, 0.0))
            .expect("k + 1 is never a pole")
            .log_modulus;
        let mut largest = 0.0f64;
        for (j, pr) in families.iter().enumerate() {
            let s = (pr.coeff + k as f64) / pr.weight;
            let regular = theta_excluding(spec, s, Some(j)).map_err(|_| EvalError::LogarithmicCase)?;
            let residue_factor = LogComplex::new(-ln_factorial - pr.weight.ln(), PI * k as f64);
            let term = (regular * residue_factor).mul_exp(s * ln_z).to_complex();
            if !(term.re.is_finite() && term.im.is_finite()) {
                return Err(EvalError::SeriesDiverged { terms: k + 1 });
            }
            sum += term;
            largest = largest.max(term.norm());
        }
        recent[k % QUIET_TERMS] = largest;
        if largest <= opts.rel_tol * sum.norm() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_TERMS {
            return Ok(EvalResult {
                value: sum,
                error_estimate: recent.iter().sum(),
                method: Method::Series,
                nodes_used: (k + 1) * families.len(),
                contour: None,
            });
        }
    }
    Err(EvalError::SeriesDiverged {
        terms: MAX_SERIES_TERMS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hspec::{ParamPair, RawSpec};

    #[test]
    fn exponential_series() {
        let spec = RawSpec::new(1, 0, vec![], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        let r = evaluate_series(&spec, Argument::new(1.0, 0.0).unwrap(), &QuadratureOptions::default()).unwrap();
        assert!((r.value - (-1.0f64).exp()).norm() < 1e-12);
        assert_eq!(r.method, Method::Series);
    }

    #[test]
    fn geometric_series() {
        let spec = RawSpec::new(1, 1, vec![ParamPair::real(0.0, 1.0)], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        let r = evaluate_series(&spec, Argument::new(0.5, 0.0).unwrap(), &QuadratureOptions::default()).unwrap();
        assert!((r.value - 2.0 / 3.0).norm() < 1e-10);
    }

    #[test]
    fn coincident_poles_are_logarithmic() {
        let spec = RawSpec::new(2, 0, vec![], vec![ParamPair::real(0.0, 1.0), ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        assert_eq!(
            evaluate_series(&spec, Argument::new(0.5, 0.0).unwrap(), &QuadratureOptions::default()),
            Err(EvalError::LogarithmicCase)
        );
    }

    #[test]
    fn geometric_series_diverges_outside_unit_disk() {
        let spec = RawSpec::new(1, 1, vec![ParamPair::real(0.0, 1.0)], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        assert!(matches!(
            evaluate_series(&spec, Argument::new(1.5, 0.0).unwrap(), &QuadratureOptions::default()),
            Err(EvalError::SeriesDiverged { .. })
        ));
    }
}
