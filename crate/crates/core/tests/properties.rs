use foxh::gammakit::{ln_gamma, LogComplex};
use foxh::hspec::{pole_sets, Argument, ParamPair, RawSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn pair() -> impl Strategy<Value = ParamPair> {
    (-1.0..1.0f64, -0.5..0.5f64, 0.2..2.0f64).prop_map(|(re, im, w)| ParamPair::new(Complex64::new(re, im), w))
}

fn raw_spec() -> impl Strategy<Value = RawSpec> {
    (0usize..3, 1usize..4)
        .prop_flat_map(|(p, q)| {
            (
                Just(p),
                Just(q),
                prop::collection::vec(pair(), p),
                prop::collection::vec(pair(), q),
                0..=p,
                1..=q,
            )
        })
        .prop_map(|(_, _, upper, lower, n, m)| RawSpec::new(m, n, upper, lower))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn json_round_trip(raw in raw_spec()) {
        let text = raw.to_json();
        prop_assert_eq!(RawSpec::from_json(&text).unwrap(), raw.clone());
        let again = RawSpec::from_json(&text).unwrap().to_json();
        prop_assert_eq!(again, text);
    }

    #[test]
    fn validate_is_idempotent(raw in raw_spec()) {
        if let Ok(spec) = raw.clone().validate() {
            prop_assert_eq!(spec.raw(), &raw);
            let again = spec.clone().into_raw().validate().unwrap();
            prop_assert_eq!(again, spec);
        }
    }

    #[test]
    fn padding_moves_a_star_by_twice_the_weight(raw in raw_spec(), pad in pair()) {
        let Ok(spec) = raw.clone().validate() else { return Ok(()) };
        let a_star = spec.profile().a_star;
        if let Ok(up) = raw.clone().prepend_numerator(pad).validate() {
            prop_assert!((up.profile().a_star - (a_star + 2.0 * pad.weight)).abs() < 1e-12);
            prop_assert_eq!((up.m(), up.n(), up.p(), up.q()), (spec.m() + 1, spec.n() + 1, spec.p() + 1, spec.q() + 1));
        }
        if let Ok(down) = raw.append_denominator(pad).validate() {
            prop_assert!((down.profile().a_star - (a_star - 2.0 * pad.weight)).abs() < 1e-12);
            prop_assert_eq!((down.m(), down.n()), (spec.m(), spec.n()));
        }
    }

    #[test]
    fn poles_lie_on_their_side_of_the_strip(raw in raw_spec()) {
        let Ok(spec) = raw.validate() else { return Ok(()) };
        let profile = *spec.profile();
        let (right, left) = pole_sets(&spec, 5);
        prop_assert!(right.iter().all(|s| s.re >= profile.c_max));
        prop_assert!(left.iter().all(|s| s.re <= profile.c_min));
        prop_assert!(right.windows(2).all(|w| w[0].re <= w[1].re));
        prop_assert!(left.windows(2).all(|w| w[0].re >= w[1].re));
    }

    #[test]
    fn rotation_composes(modulus in 0.01..100.0f64, phase in -10.0..10.0f64, a in -5.0..5.0f64, b in -5.0..5.0f64) {
        let z = Argument::new(modulus, phase).unwrap();
        let two = z.rotated(a).rotated(b);
        prop_assert!((two.phase() - (phase + a + b)).abs() < 1e-12);
        prop_assert_eq!(two.modulus(), modulus);
        // z^s on the sheet: ln z = ln r + i phase, not reduced
        prop_assert!((z.ln().im - phase).abs() == 0.0);
    }

    #[test]
    fn log_gamma_conjugate_symmetry(re in -6.0..6.0f64, im in 0.01..8.0f64) {
        let z = Complex64::new(re, im);
        let a = ln_gamma(z).unwrap();
        let b = ln_gamma(z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn log_complex_products(ar in -3.0..3.0f64, ai in -3.0..3.0f64, br in -3.0..3.0f64, bi in -3.0..3.0f64) {
        let (a, b) = (Complex64::new(ar, ai), Complex64::new(br, bi));
        prop_assume!(a.norm() > 1e-3 && b.norm() > 1e-3);
        let p = (LogComplex::from_complex(a) * LogComplex::from_complex(b)).to_complex();
        prop_assert!((p - a * b).norm() <= 1e-13 * (a * b).norm());
        let q = (LogComplex::from_complex(a) / LogComplex::from_complex(b)).to_complex();
        prop_assert!((q - a / b).norm() <= 1e-13 * (a / b).norm());
    }
}
