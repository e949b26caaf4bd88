//! The Mellin-Barnes kernel
//!
//! ```text
//!            Π_{j≤m} Γ(b_j - f_j s) · Π_{j≤n} Γ(1 - a_j + e_j s)
//!   θ(s) = ------------------------------------------------------
//!          Π_{j>m} Γ(1 - b_j + f_j s) · Π_{j>n} Γ(a_j - e_j s)
//! ```
//!
//! and the integrand `θ(s) z^s`, both kept in log-space.

use num_complex::Complex64;
use thiserror::Error;

use crate::gammakit::{log_gamma, recip_gamma, GammaError, LogComplex};
use crate::hspec::{Argument, HFunctionSpec, ListSide};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MellinError {
    #[error("s = {s} is a pole of the numerator gamma from {list} pair {index}")]
    PoleOfNumerator { s: Complex64, list: ListSide, index: usize },
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// One evaluated integrand sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub s: Complex64,
    pub value: LogComplex,
}

pub fn theta(spec: &HFunctionSpec, s: Complex64) -> Result<LogComplex, MellinError> {
    theta_excluding(spec, s, None)
}

/// θ(s) with the numerator factor `Γ(b_skip - f_skip s)` left out.
///
/// This is the regular part of θ at the right poles of family `skip`, as
/// needed by the residue series.
pub fn theta_excluding(spec: &HFunctionSpec, s: Complex64, skip: Option<usize>) -> Result<LogComplex, MellinError> {
    let numerator = |list: ListSide, index: usize, arg: Complex64| {
        log_gamma(arg).map_err(|e| match e {
            GammaError::PoleAtNonPositiveInteger(_) => MellinError::PoleOfNumerator { s, list, index },
            other => MellinError::Gamma(other),
        })
    };

    let mut acc = LogComplex::ONE;
    for (j, pr) in spec.lower().iter().enumerate() {
        if j < spec.m() {
            if Some(j) != skip {
                acc = acc * numerator(ListSide::Lower, j, pr.coeff - pr.weight * s)?;
            }
        } else {
            acc = acc * recip_gamma(1.0 - pr.coeff + pr.weight * s)?;
        }
    }
    for (j, pr) in spec.upper().iter().enumerate() {
        if j < spec.n() {
            acc = acc * numerator(ListSide::Upper, j, 1.0 - pr.coeff + pr.weight * s)?;
        } else {
            acc = acc * recip_gamma(pr.coeff - pr.weight * s)?;
        }
    }
    Ok(acc)
}

/// `θ(s) z^s` with `z^s = exp(s (ln|z| + i phase))` on the argument's own sheet.
pub fn integrand(spec: &HFunctionSpec, z: Argument, s: Complex64) -> Result<LogComplex, MellinError> {
    Ok(theta(spec, s)?.mul_exp(s * z.ln()))
}

pub fn kernel_point(spec: &HFunctionSpec, z: Argument, s: Complex64) -> Result<KernelPoint, MellinError> {
    Ok(KernelPoint {
        s,
        value: integrand(spec, z, s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hspec::{ParamPair, RawSpec};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn h10() -> HFunctionSpec {
        RawSpec::new(1, 0, vec![], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap()
    }

    fn h11() -> HFunctionSpec {
        RawSpec::new(1, 1, vec![ParamPair::real(0.0, 1.0)], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap()
    }

    #[test]
    fn theta_classical_values() {
        let sqrt_pi = PI.sqrt();
        let v = theta(&h10(), c(-0.5, 0.0)).unwrap().to_complex();
        assert!((v - sqrt_pi).norm() < 1e-14);
        let v = theta(&h10(), c(0.5, 0.0)).unwrap().to_complex();
        assert!((v + 2.0 * sqrt_pi).norm() < 1e-13);
        let v = theta(&h11(), c(0.5, 0.0)).unwrap().to_complex();
        assert!((v + PI).norm() < 1e-13);
    }

    #[test]
    fn numerator_poles_are_errors_denominator_poles_are_zero() {
        assert!(matches!(
            theta(&h10(), c(2.0, 0.0)),
            Err(MellinError::PoleOfNumerator {
                list: ListSide::Lower,
                index: 0,
                ..
            })
        ));
        // 1/Γ(1 - b + f s) vanishes at s = -1 for b = 0, f = 1
        let spec = RawSpec::new(1, 0, vec![], vec![ParamPair::real(0.5, 1.0), ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        assert!(theta(&spec, c(-1.0, 0.0)).unwrap().is_zero());
    }

    #[test]
    fn integrand_examples() {
        let s = c(0.3, -1.7);
        let unit = Argument::new(1.0, 0.0).unwrap();
        assert_eq!(integrand(&h11(), unit, s).unwrap(), theta(&h11(), s).unwrap());

        let e = Argument::new(std::f64::consts::E, 0.0).unwrap();
        let v = integrand(&h10(), e, c(-0.5, 0.0)).unwrap().to_complex();
        assert!((v - 1.075_047_603_499_920_2).norm() < 1e-14);

        // z = e^{iπ/4}, s = i: z^s = e^{-π/4}, real damping
        let z = Argument::new(1.0, PI / 4.0).unwrap();
        let v = integrand(&h10(), z, c(0.0, 1.0)).unwrap().to_complex();
        let want = theta(&h10(), c(0.0, 1.0)).unwrap().to_complex() * (-PI / 4.0).exp();
        assert!((v - want).norm() < 1e-15);
        assert!((v - c(-0.070_647_534_613_590_14, 0.227_064_331_320_015)).norm() < 1e-14);
    }

    #[test]
    fn conjugate_symmetry_for_real_parameters() {
        let spec = RawSpec::new(
            2,
            1,
            vec![ParamPair::real(0.2, 1.0)],
            vec![ParamPair::real(0.0, 1.0), ParamPair::real(0.35, 0.7)],
        )
        .validate()
        .unwrap();
        let z = Argument::new(0.6, 0.0).unwrap();
        for s in [c(-0.3, 4.0), c(-0.1, -12.5), c(-0.5, 30.0)] {
            let a = integrand(&spec, z, s).unwrap().to_complex();
            let b = integrand(&spec, z, s.conj()).unwrap().to_complex();
            assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn pair_padding_adds_reflection_pair() {
        let base = h11();
        let gamma = 0.37;
        let w = 0.6;
        let padded = base
            .raw()
            .clone()
            .prepend_numerator(ParamPair::real(gamma, w))
            .validate()
            .unwrap();
        for s in [c(-0.2, 0.0), c(-0.4, 5.0), c(-0.1, -18.0)] {
            let lhs = theta(&padded, s).unwrap() / theta(&base, s).unwrap();
            let rhs = log_gamma(gamma - w * s).unwrap() * log_gamma(1.0 - gamma + w * s).unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-12));
        }
    }
}
