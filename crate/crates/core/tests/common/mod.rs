#![allow(dead_code)]

use foxh::hspec::{Argument, HFunctionSpec, ParamPair, RawSpec};
use foxh::identities::{admissible_sector, build_identity, AdmissibleRegion, IdentityCase, IdentityId, IdentityParams};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn spec(m: usize, n: usize, upper: &[(f64, f64)], lower: &[(f64, f64)]) -> HFunctionSpec {
    let pairs = |l: &[(f64, f64)]| l.iter().map(|&(a, w)| ParamPair::real(a, w)).collect();
    RawSpec::new(m, n, pairs(upper), pairs(lower)).validate().unwrap()
}

pub fn h10() -> HFunctionSpec {
    spec(1, 0, &[], &[(0.0, 1.0)])
}

pub fn h11() -> HFunctionSpec {
    spec(1, 1, &[(0.0, 1.0)], &[(0.0, 1.0)])
}

pub fn h21() -> HFunctionSpec {
    spec(2, 1, &[(0.2, 1.0)], &[(0.0, 1.0), (0.35, 1.0)])
}

pub fn arg(modulus: f64, phase: f64) -> Argument {
    Argument::new(modulus, phase).unwrap()
}

pub fn rel(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// One admissible draw: the built case and its testable region.
pub struct Draw {
    pub params: IdentityParams,
    pub case: IdentityCase,
    pub region: AdmissibleRegion,
}

/// Draws α, β ∈ (0.05, 0.95), λ, δ ∈ (0.2, 0.8) until `wanted` draws build
/// and have a nonempty admissible region. Returns the draws and the number
/// of attempts.
pub fn admissible_draws(id: IdentityId, base: &HFunctionSpec, seed: u64, wanted: usize) -> (Vec<Draw>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::new();
    let mut attempts = 0;
    while draws.len() < wanted && attempts < 100 * wanted {
        attempts += 1;
        let params = IdentityParams::new(
            rng.random_range(0.05..0.95),
            rng.random_range(0.05..0.95),
            rng.random_range(0.2..0.8),
            rng.random_range(0.2..0.8),
            base.clone(),
        );
        let Ok(case) = build_identity(id, &params) else {
            continue;
        };
        let Ok(region) = admissible_sector(&case) else { continue };
        draws.push(Draw { params, case, region });
    }
    (draws, attempts)
}

/// Three arguments inside the region: different moduli, phases 0 and
/// ±half the admissible band.
pub fn sample_arguments(region: &AdmissibleRegion) -> Vec<Argument> {
    let half = 0.5 * region.max_phase;
    vec![arg(0.4, 0.0), arg(0.8, half), arg(1.6, -half)]
}
