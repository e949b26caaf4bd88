use num_complex::Complex64;
use serde::Serialize;

use crate::gammakit::ln_gamma;
use crate::hspec::{Argument, HFunctionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormTag {
    /// `H^{1,0}_{0,1}[z | -; (b,1)] = z^b e^{-z}`
    Exp,
    /// `H^{1,1}_{1,1}[z | (a,1); (b,1)] = Γ(1-a+b) z^b (1+z)^{-(1-a+b)}`
    Binomial,
}

/// A recognized elementary reduction, ready to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    Exp { b: Complex64 },
    Binomial { a: Complex64, b: Complex64 },
}

impl ClosedForm {
    pub fn tag(&self) -> ClosedFormTag {
        match self {
            ClosedForm::Exp { .. } => ClosedFormTag::Exp,
            ClosedForm::Binomial { .. } => ClosedFormTag::Binomial,
        }
    }

    /// `z^b` uses the argument's own sheet; `e^{-z}` and `1 + z` only see the
    /// projected point.
    pub fn evaluate(&self, z: Argument) -> Complex64 {
        let w = z.to_complex();
        match *self {
            ClosedForm::Exp { b } => (b * z.ln() - w).exp(),
            ClosedForm::Binomial { a, b } => {
                let c = 1.0 - a + b;
                let ln_gamma_c = ln_gamma(c).expect("Re(1-a+b) > 0 checked at reduction");
                (ln_gamma_c + b * z.ln() - c * (1.0 + w).ln()).exp()
            }
        }
    }
}

pub fn reduce_closed_form(spec: &HFunctionSpec) -> Option<ClosedForm> {
    let unit = |w: f64| w == 1.0;
    match (spec.m(), spec.n(), spec.upper(), spec.lower()) {
        (1, 0, [], [b]) if unit(b.weight) => Some(ClosedForm::Exp { b: b.coeff }),
        (1, 1, [a], [b]) if unit(a.weight) && unit(b.weight) && (1.0 - a.coeff + b.coeff).re > 0.0 => {
            Some(ClosedForm::Binomial { a: a.coeff, b: b.coeff })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hspec::{ParamPair, RawSpec};

    #[test]
    fn recognizes_catalog() {
        let exp = RawSpec::new(1, 0, vec![], vec![ParamPair::real(0.0, 1.0)])
            .validate()
            .unwrap();
        let form = reduce_closed_form(&exp).unwrap();
        assert_eq!(form.tag(), ClosedFormTag::Exp);
        let z = Argument::new(1.0, 0.0).unwrap();
        assert!((form.evaluate(z) - 0.367_879_441_171_442_3).norm() < 1e-15);

        let bin = RawSpec::new(1, 1, vec![ParamPair::real(0.0, 1.0)], vec![ParamPair::real(0.5, 1.0)])
            .validate()
            .unwrap();
        let form = reduce_closed_form(&bin).unwrap();
        assert_eq!(form.tag(), ClosedFormTag::Binomial);
        let z = Argument::new(2.0, 0.0).unwrap();
        let want = 0.886_226_925_452_758 * 2f64.sqrt() * 3f64.powf(-1.5);
        assert!((form.evaluate(z) - want).norm() < 1e-14);
    }

    #[test]
    fn other_shapes_are_absent() {
        let h20 = RawSpec::new(2, 0, vec![], vec![ParamPair::real(0.0, 1.0), ParamPair::real(0.5, 1.0)])
            .validate()
            .unwrap();
        assert!(reduce_closed_form(&h20).is_none());
        let weighted = RawSpec::new(1, 0, vec![], vec![ParamPair::real(0.0, 2.0)])
            .validate()
            .unwrap();
        assert!(reduce_closed_form(&weighted).is_none());
    }
}
