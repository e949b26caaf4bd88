//! Numerical values of H-functions.
//!
//! Three independent routes:
//! - [`evaluate_contour`]: composite Gauss-Legendre quadrature on a vertical
//!   line `Re s = c` inside the contour strip. The primary path.
//! - [`evaluate_series`]: residue sum over the right poles. Only used as an
//!   oracle; needs simple poles and a convergent series.
//! - [`reduce_closed_form`]: two elementary reductions used as ground truth.

mod closed_form;
mod contour;
pub(crate) mod gauss;
mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hspec::SpecError;
use crate::mellin::MellinError;

pub use closed_form::{reduce_closed_form, ClosedForm, ClosedFormTag};
pub use contour::{
    default_abscissa, evaluate_contour, evaluate_contour_at, initial_truncation, strip_window, SECTOR_MARGIN,
};
pub use series::{evaluate_series, MAX_SERIES_TERMS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("phase {phase} outside the convergence sector |phase| < {sector_halfwidth} (a* = {a_star})")]
    OutsideConvergenceSector {
        phase: f64,
        sector_halfwidth: f64,
        a_star: f64,
    },
    #[error("quadrature budget of {max_nodes} nodes exhausted (last estimate {estimate}, error {error})")]
    BudgetExceeded {
        max_nodes: usize,
        estimate: Complex64,
        error: f64,
    },
    #[error("abscissa {abscissa} not inside the contour strip ({c_min}, {c_max})")]
    AbscissaOutsideStrip { abscissa: f64, c_min: f64, c_max: f64 },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("invalid quadrature options: {0}")]
    InvalidOptions(String),
    #[error("coincident right poles: residue series is in the logarithmic case")]
    LogarithmicCase,
    #[error("residue series did not reach tolerance within {terms} terms")]
    SeriesDiverged { terms: usize },
    #[error(transparent)]
    Kernel(#[from] MellinError),
}

impl EvalError {
    /// Variant name, as used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            EvalError::OutsideConvergenceSector { .. } => "OutsideConvergenceSector",
            EvalError::BudgetExceeded { .. } => "BudgetExceeded",
            EvalError::AbscissaOutsideStrip { .. } => "AbscissaOutsideStrip",
            EvalError::Spec(_) => "Spec",
            EvalError::InvalidOptions(_) => "InvalidOptions",
            EvalError::LogarithmicCase => "LogarithmicCase",
            EvalError::SeriesDiverged { .. } => "SeriesDiverged",
            EvalError::Kernel(_) => "Kernel",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Contour,
    Series,
    ClosedForm,
}

/// The integration segment `[c - iT, c + iT]` actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub truncation: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    /// Last successive-refinement difference plus the tail estimate. Not a
    /// rigorous bound on the true error.
    pub error_estimate: f64,
    pub method: Method,
    pub nodes_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    pub rel_tol: f64,
    pub max_nodes: usize,
    pub tail_safety: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_nodes: 200_000,
            tail_safety: 10.0,
        }
    }
}

impl QuadratureOptions {
    pub fn check(&self) -> Result<(), EvalError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(EvalError::InvalidOptions(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_nodes < 64 {
            return Err(EvalError::InvalidOptions(format!(
                "max_nodes must be at least 64, got {}",
                self.max_nodes
            )));
        }
        if !(self.tail_safety > 0.0 && self.tail_safety.is_finite()) {
            return Err(EvalError::InvalidOptions(format!(
                "tail_safety must be positive, got {}",
                self.tail_safety
            )));
        }
        Ok(())
    }
}
