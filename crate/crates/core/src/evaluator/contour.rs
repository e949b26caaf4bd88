use std::f64::consts::PI;

use num_complex::Complex64;

use super::gauss::{rule32, NODES_PER_PANEL};
use super::{ContourSpec, EvalError, EvalResult, Method, QuadratureOptions};
use crate::gammakit::LogComplex;
use crate::hspec::{Argument, ConvergenceProfile, HFunctionSpec};
use crate::mellin::integrand;

/// Arguments must stay this far inside the convergence sector.
pub const SECTOR_MARGIN: f64 = 1e-6;

/// Half-width of the finite window substituted for an unbounded strip side.
const OPEN_SIDE_WINDOW: f64 = 2.0;

const INITIAL_PANEL_WIDTH: f64 = 2.0;
const TRUNCATION_GROWTH: f64 = 1.5;

/// Successive differences below this multiple of `∫|f|` are roundoff.
const ROUNDOFF_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Finite sub-interval of the contour strip used to place abscissae.
///
/// An unbounded side is replaced by the finite side moved
/// `OPEN_SIDE_WINDOW` away; a strip unbounded on both sides becomes
/// `[-OPEN_SIDE_WINDOW, OPEN_SIDE_WINDOW]`.
pub fn strip_window(profile: &ConvergenceProfile) -> (f64, f64) {
    match (profile.c_min.is_finite(), profile.c_max.is_finite()) {
        (true, true) => (profile.c_min, profile.c_max),
        (false, true) => (profile.c_max - OPEN_SIDE_WINDOW, profile.c_max),
        (true, false) => (profile.c_min, profile.c_min + OPEN_SIDE_WINDOW),
        (false, false) => (-OPEN_SIDE_WINDOW, OPEN_SIDE_WINDOW),
    }
}

pub fn default_abscissa(profile: &ConvergenceProfile) -> f64 {
    let (lo, hi) = strip_window(profile);
    0.5 * (lo + hi)
}

/// Smallest `T` with `exp(-decay T + rho ln T) <= eps`, by bisection on the
/// decreasing branch `T > rho / decay`.
pub fn initial_truncation(decay: f64, rho: f64, eps: f64) -> f64 {
    let g = |t: f64| -decay * t + rho * t.ln() - eps.ln();
    let mut lo = (rho / decay).max(1.0);
    if g(lo) <= 0.0 {
        return lo;
    }
    let mut hi = 2.0 * lo;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

pub fn evaluate_contour(spec: &HFunctionSpec, z: Argument, opts: &QuadratureOptions) -> Result<EvalResult, EvalError> {
    evaluate_contour_at(spec, z, opts, default_abscissa(spec.profile()))
}

/// `(1/2πi) ∫ θ(s) z^s ds` along `Re s = abscissa`.
///
/// With `s = c + it` this is `(1/2π) ∫ θ(c+it) z^{c+it} dt`. Every panel is
/// bisected until two successive sums agree to `rel_tol`, then the tail beyond
/// `±T` is checked against the integrand magnitude at the endpoints and `T`
/// is extended if needed. The starting panels are graded toward poles lying
/// close to the line.
pub fn evaluate_contour_at(
    spec: &HFunctionSpec,
    z: Argument,
    opts: &QuadratureOptions,
    abscissa: f64,
) -> Result<EvalResult, EvalError> {
    opts.check()?;
    let profile = spec.profile();
    if !profile.admits_phase(z.phase(), SECTOR_MARGIN) {
        return Err(EvalError::OutsideConvergenceSector {
            phase: z.phase(),
            sector_halfwidth: profile.sector_halfwidth,
            a_star: profile.a_star,
        });
    }
    if !(profile.c_min < abscissa && abscissa < profile.c_max) {
        return Err(EvalError::AbscissaOutsideStrip {
            abscissa,
            c_min: profile.c_min,
            c_max: profile.c_max,
        });
    }

    let decay = profile.sector_halfwidth - z.phase().abs();
    let tail_eps = opts.rel_tol / opts.tail_safety;
    let mut truncation = initial_truncation(decay, spec.total_weight(), tail_eps);
    let mut level = 0usize;
    let mut mesh = base_mesh(spec, abscissa, truncation);
    let mut nodes_used = 0usize;

    loop {
        let mut prev = line_sum(spec, z, abscissa, &mesh)?;
        nodes_used += prev.nodes;
        let (current, diff) = loop {
            let next_mesh = bisect(&mesh);
            let next_nodes = (next_mesh.len() - 1) * NODES_PER_PANEL;
            if nodes_used + next_nodes > opts.max_nodes {
                return Err(EvalError::BudgetExceeded {
                    max_nodes: opts.max_nodes,
                    estimate: prev.value,
                    error: f64::INFINITY,
                });
            }
            let next = line_sum(spec, z, abscissa, &next_mesh)?;
            nodes_used += next.nodes;
            mesh = next_mesh;
            level += 1;
            let diff = (next.value - prev.value).norm();
            let floor = ROUNDOFF_FLOOR * next.abs_integral;
            if diff <= (opts.rel_tol * next.value.norm()).max(floor) {
                break (next, diff);
            }
            prev = next;
        };

        let tail = tail_estimate(spec, z, abscissa, truncation, decay)?;
        let scale = current.value.norm().max(ROUNDOFF_FLOOR * current.abs_integral);
        if tail <= tail_eps * scale {
            return Ok(EvalResult {
                value: current.value,
                error_estimate: diff + tail,
                method: Method::Contour,
                nodes_used,
                contour: Some(ContourSpec {
                    abscissa,
                    truncation,
                    panels: mesh.len() - 1,
                }),
            });
        }
        if nodes_used >= opts.max_nodes {
            return Err(EvalError::BudgetExceeded {
                max_nodes: opts.max_nodes,
                estimate: current.value,
                error: diff + tail,
            });
        }
        // longer segment, same refinement level
        truncation *= TRUNCATION_GROWTH;
        mesh = base_mesh(spec, abscissa, truncation);
        for _ in 0..level {
            mesh = bisect(&mesh);
        }
    }
}

/// Poles of the numerator gammas within `reach` of the line `Re s = abscissa`.
fn poles_near_line(spec: &HFunctionSpec, abscissa: f64, reach: f64) -> Vec<Complex64> {
    let mut poles = Vec::new();
    // Γ(b_j - f_j s): s = (b_j + k)/f_j, real part increasing in k
    for pr in &spec.lower()[..spec.m()] {
        for k in 0.. {
            let s = (pr.coeff + k as f64) / pr.weight;
            if s.re > abscissa + reach {
                break;
            }
            if (s.re - abscissa).abs() < reach {
                poles.push(s);
            }
        }
    }
    // Γ(1 - a_j + e_j s): s = (a_j - 1 - k)/e_j, real part decreasing in k
    for pr in &spec.upper()[..spec.n()] {
        for k in 0.. {
            let s = (pr.coeff - 1.0 - k as f64) / pr.weight;
            if s.re < abscissa - reach {
                break;
            }
            if (s.re - abscissa).abs() < reach {
                poles.push(s);
            }
        }
    }
    poles
}

/// Breakpoints on `[-T, T]`: uniform panels of `INITIAL_PANEL_WIDTH`, plus,
/// for each pole at distance `d` from the line, breakpoints at
/// `Im(pole) ± d 2^i`. Panels near a pole then shrink with their distance
/// to it, so every panel sees the pole at a fixed relative distance.
fn base_mesh(spec: &HFunctionSpec, abscissa: f64, truncation: f64) -> Vec<f64> {
    let panels = ((2.0 * truncation / INITIAL_PANEL_WIDTH).ceil() as usize).max(1);
    let width = 2.0 * truncation / panels as f64;
    let mut points: Vec<f64> = (0..=panels).map(|i| -truncation + i as f64 * width).collect();
    for pole in poles_near_line(spec, abscissa, INITIAL_PANEL_WIDTH) {
        let mut offset = (pole.re - abscissa).abs();
        while offset < INITIAL_PANEL_WIDTH {
            points.extend(
                [pole.im - offset, pole.im + offset]
                    .into_iter()
                    .filter(|t| t.abs() < truncation),
            );
            offset *= 2.0;
        }
    }
    points.sort_by(f64::total_cmp);
    let min_gap = 1e-14 * truncation;
    points.dedup_by(|a, b| *a - *b <= min_gap);
    points
}

fn bisect(mesh: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * mesh.len() - 1);
    for pair in mesh.windows(2) {
        out.push(pair[0]);
        out.push(0.5 * (pair[0] + pair[1]));
    }
    out.push(mesh[mesh.len() - 1]);
    out
}

struct LineSum {
    value: Complex64,
    abs_integral: f64,
    nodes: usize,
}

// Composite rule over the panels of `mesh`. Integrand values stay in
// log-space until the final accumulation, which factors out the largest
// log-modulus.
fn line_sum(spec: &HFunctionSpec, z: Argument, abscissa: f64, mesh: &[f64]) -> Result<LineSum, EvalError> {
    let rule = rule32();
    let mut samples: Vec<LogComplex> = Vec::with_capacity((mesh.len() - 1) * NODES_PER_PANEL);
    for pair in mesh.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        let half = 0.5 * (pair[1] - pair[0]);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = mid + half * x;
            let f = integrand(spec, z, Complex64::new(abscissa, t))?;
            samples.push(f * LogComplex::new((w * half).ln(), 0.0));
        }
    }
    let peak = samples
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.log_modulus)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return Ok(LineSum {
            value: Complex64::new(0.0, 0.0),
            abs_integral: 0.0,
            nodes: samples.len(),
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for v in &samples {
        let term = v.to_complex_scaled(peak);
        sum += term;
        abs_sum += term.norm();
    }
    let scale = peak.exp() / (2.0 * PI);
    Ok(LineSum {
        value: sum * scale,
        abs_integral: abs_sum * scale,
        nodes: samples.len(),
    })
}

// ∫_T^∞ of an envelope decaying like e^{-decay t}; the factor 2 covers the
// slower algebraic part of the decay.
fn tail_estimate(
    spec: &HFunctionSpec,
    z: Argument,
    abscissa: f64,
    truncation: f64,
    decay: f64,
) -> Result<f64, EvalError> {
    let upper = integrand(spec, z, Complex64::new(abscissa, truncation))?.modulus();
    let lower = integrand(spec, z, Complex64::new(abscissa, -truncation))?.modulus();
    Ok((upper + lower) * 2.0 / decay / (2.0 * PI))
}
