//! Numerical engine for the Fox H-function
//!
//! ```text
//!   H^{m,n}_{p,q}[z] = (1/2πi) ∫_L θ(s) z^s ds
//! ```
//!
//! evaluated by vertical-line Gauss-Legendre quadrature, with a residue-series
//! oracle, closed-form reductions, and a harness that checks H-function
//! identities both at the kernel level and after quadrature.

pub mod checks;
pub mod cli;
pub mod evaluator;
pub mod gammakit;
pub mod hspec;
pub mod identities;
pub mod mellin;
pub mod report;

pub use evaluator::{
    evaluate_contour, evaluate_series, reduce_closed_form, EvalError, EvalResult, Method, QuadratureOptions,
};
pub use gammakit::{log_gamma, LogComplex};
pub use hspec::{Argument, ConvergenceProfile, HFunctionSpec, ParamPair, RawSpec, SpecError};
pub use num_complex::Complex64;
