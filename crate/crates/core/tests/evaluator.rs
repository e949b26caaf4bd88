mod common;

use foxh::evaluator::{evaluate_contour, evaluate_series, EvalError, QuadratureOptions};
use num_complex::Complex64;

use common::*;

// H^{1,0}_{0,1}[z | -; (b,f)] = (1/f) z^{b/f} exp(-z^{1/f}), with z^{1/f}
// taken on the sheet of the argument.
fn weighted_exp(b: f64, f: f64, modulus: f64, phase: f64) -> Complex64 {
    let ln_z = Complex64::new(modulus.ln(), phase);
    ((b / f) * ln_z - (ln_z / f).exp()).exp() / f
}

#[test]
fn weighted_exponential_against_formula() {
    let opts = QuadratureOptions::default();
    for (b, f) in [(0.5, 2.0), (0.0, 0.5), (1.2, 3.0)] {
        let s = spec(1, 0, &[], &[(b, f)]);
        for (m, phase) in [(0.3, 0.0), (1.0, 0.3), (4.0, -0.2)] {
            let got = evaluate_contour(&s, arg(m, phase), &opts).unwrap().value;
            let want = weighted_exp(b, f, m, phase);
            assert!(rel(got, want) < 1e-9, "b={b} f={f} z=({m},{phase}): {got} vs {want}");
        }
    }
}

#[test]
fn arguments_beyond_one_turn() {
    // a* = 5 allows |phase| < 2.5π; phase 7 is past a full turn
    let s = spec(1, 0, &[], &[(0.5, 5.0)]);
    let opts = QuadratureOptions::default();
    for phase in [7.0, -7.0, 2.0 * std::f64::consts::PI] {
        let got = evaluate_contour(&s, arg(1.3, phase), &opts).unwrap().value;
        let want = weighted_exp(0.5, 5.0, 1.3, phase);
        assert!(rel(got, want) < 1e-9, "phase {phase}: {got} vs {want}");
    }
    // the same point on another sheet is a different value
    let a = evaluate_contour(&s, arg(1.3, 0.5), &opts).unwrap().value;
    let b = evaluate_contour(&s, arg(1.3, 0.5 + 2.0 * std::f64::consts::PI), &opts)
        .unwrap()
        .value;
    assert!(rel(a, b) > 1e-3);
}

#[test]
fn real_parameters_give_conjugate_symmetric_values() {
    let opts = QuadratureOptions::default();
    for s in [
        h11(),
        h21(),
        spec(2, 2, &[(0.0, 1.0), (0.1, 1.0)], &[(0.25, 1.0), (0.6, 1.0)]),
    ] {
        let real = evaluate_contour(&s, arg(0.7, 0.0), &opts).unwrap().value;
        assert!(real.im.abs() <= 1e-12 * real.norm(), "{real}");
        let up = evaluate_contour(&s, arg(0.7, 0.4), &opts).unwrap().value;
        let down = evaluate_contour(&s, arg(0.7, -0.4), &opts).unwrap().value;
        assert!(rel(up, down.conj()) < 1e-12);
    }
}

#[test]
fn series_matches_contour_with_complex_coefficients() {
    let s = foxh::RawSpec::new(
        1,
        1,
        vec![foxh::ParamPair::new(Complex64::new(0.1, 0.2), 1.0)],
        vec![foxh::ParamPair::new(Complex64::new(0.3, -0.1), 1.0)],
    )
    .validate()
    .unwrap();
    let opts = QuadratureOptions::default();
    let z = arg(0.6, 0.25);
    let c = evaluate_contour(&s, z, &opts).unwrap().value;
    let r = evaluate_series(&s, z, &opts).unwrap().value;
    assert!(rel(c, r) < 1e-9, "{c} vs {r}");
}

#[test]
fn evaluation_reports_its_contour() {
    let r = evaluate_contour(&h11(), arg(0.5, 0.0), &QuadratureOptions::default()).unwrap();
    let contour = r.contour.unwrap();
    assert_eq!(contour.abscissa, -0.5);
    assert!(contour.truncation > 1.0 && contour.panels >= 2);
    assert!(r.error_estimate < 1e-9 * r.value.norm());
    assert!((r.value - 2.0 / 3.0).norm() < 1e-10);
}

#[test]
fn budget_error_keeps_the_last_estimate() {
    let opts = QuadratureOptions {
        max_nodes: 200,
        ..QuadratureOptions::default()
    };
    match evaluate_contour(&h11(), arg(0.5, 3.1), &opts) {
        Err(EvalError::BudgetExceeded {
            max_nodes, estimate, ..
        }) => {
            assert_eq!(max_nodes, 200);
            assert!(estimate.re.is_finite());
        }
        other => panic!("expected budget error, got {other:?}"),
    }
}
