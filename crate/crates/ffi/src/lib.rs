//! C ABI for the `foxh` engine.
//!
//! Specs and identity cases live behind opaque handles created by
//! `foxh_spec_from_json` / `foxh_identity_build` and released with the
//! matching `*_free`. Every function returns a [`FoxhStatus`]; on failure a
//! description is available from [`foxh_last_error_message`] on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use foxh::evaluator::{evaluate_contour, evaluate_series, EvalError, EvalResult, QuadratureOptions};
use foxh::gammakit::ln_gamma;
use foxh::hspec::{Argument, HFunctionSpec, RawSpec};
use foxh::identities::{
    admissible_sector, build_identity, verify, IdentityCase, IdentityError, IdentityId, IdentityParams,
};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoxhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSpec = 4,
    InvalidArgument = 5,
    OutsideSector = 6,
    BudgetExceeded = 7,
    SeriesUnavailable = 8,
    Pole = 9,
    InvalidParams = 10,
    EmptyRegion = 11,
    VerificationFailed = 12,
    BufferTooSmall = 13,
    Panic = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for FoxhComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhProfile {
    pub a_star: f64,
    /// `-INFINITY` when unbounded.
    pub c_min: f64,
    /// `INFINITY` when unbounded.
    pub c_max: f64,
    pub sector_halfwidth: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhEvalResult {
    pub value: FoxhComplex,
    pub error_estimate: f64,
    pub nodes_used: usize,
    /// Contour abscissa; NaN for series results.
    pub abscissa: f64,
    /// Contour half-length; NaN for series results.
    pub truncation: f64,
}

/// `rel_tol <= 0` or `max_nodes == 0` select the defaults (1e-10, 200000).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhOptions {
    pub rel_tol: f64,
    pub max_nodes: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub delta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FoxhVerifySummary {
    pub passed: bool,
    pub samples: usize,
    pub failed_samples: usize,
    /// NaN when no sample produced a residual.
    pub worst_rel_residual: f64,
}

/// Opaque validated H-function spec.
pub struct FoxhSpec {
    inner: HFunctionSpec,
}

/// Opaque identity case.
pub struct FoxhIdentity {
    inner: IdentityCase,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FoxhStatus, String);

impl Failure {
    fn new(status: FoxhStatus, message: impl Into<String>) -> Self {
        Self(status, message.into())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FoxhStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FoxhStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FoxhStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either NULL or a pointer obtained from this library
    // (handles) or to a live, properly aligned value (out-params, structs).
    unsafe { p.as_ref() }.ok_or_else(|| Failure::new(FoxhStatus::NullPointer, format!("{what} is NULL")))
}

fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: as in `non_null`; the caller owns the pointed-to storage.
    unsafe { p.as_mut() }.ok_or_else(|| Failure::new(FoxhStatus::NullPointer, format!("{what} is NULL")))
}

fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(FoxhStatus::NullPointer, format!("{what} is NULL")));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| Failure::new(FoxhStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn eval_failure(e: EvalError) -> Failure {
    let status = match &e {
        EvalError::OutsideConvergenceSector { .. } => FoxhStatus::OutsideSector,
        EvalError::BudgetExceeded { .. } => FoxhStatus::BudgetExceeded,
        EvalError::LogarithmicCase | EvalError::SeriesDiverged { .. } => FoxhStatus::SeriesUnavailable,
        EvalError::Kernel(_) => FoxhStatus::Pole,
        EvalError::Spec(_) => FoxhStatus::InvalidSpec,
        EvalError::AbscissaOutsideStrip { .. } | EvalError::InvalidOptions(_) => FoxhStatus::InvalidArgument,
    };
    Failure::new(status, e.to_string())
}

fn identity_failure(e: IdentityError) -> Failure {
    let status = match &e {
        IdentityError::InvalidParams(_) => FoxhStatus::InvalidParams,
        IdentityError::SpecValidationFailed { .. } => FoxhStatus::InvalidSpec,
        IdentityError::EmptyAdmissibleRegion { .. } => FoxhStatus::EmptyRegion,
        IdentityError::PoleAtS { .. } | IdentityError::Kernel(_) => FoxhStatus::Pole,
    };
    Failure::new(status, e.to_string())
}

fn options(opts: *const FoxhOptions) -> QuadratureOptions {
    let mut q = QuadratureOptions::default();
    // SAFETY: NULL or a valid FoxhOptions per the API contract.
    if let Some(o) = unsafe { opts.as_ref() } {
        if o.rel_tol > 0.0 {
            q.rel_tol = o.rel_tol;
        }
        if o.max_nodes > 0 {
            q.max_nodes = o.max_nodes;
        }
    }
    q
}

fn argument(modulus: f64, phase: f64) -> Result<Argument, Failure> {
    Argument::new(modulus, phase).map_err(|e| Failure::new(FoxhStatus::InvalidArgument, e.to_string()))
}

fn fill(out: &mut FoxhEvalResult, r: EvalResult) {
    *out = FoxhEvalResult {
        value: r.value.into(),
        error_estimate: r.error_estimate,
        nodes_used: r.nodes_used,
        abscissa: r.contour.map_or(f64::NAN, |c| c.abscissa),
        truncation: r.contour.map_or(f64::NAN, |c| c.truncation),
    };
}

/// Message for the last failed call on this thread, or NULL after a
/// successful call. Valid until the next `foxh_*` call on the same thread.
#[no_mangle]
pub extern "C" fn foxh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn foxh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a spec in the JSON format
/// `{"m":..,"n":..,"upper":[[re,im,weight],..],"lower":[..]}`.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn foxh_spec_from_json(json: *const c_char, out: *mut *mut FoxhSpec) -> FoxhStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let text = c_str(json, "json")?;
        let raw = RawSpec::from_json(text).map_err(|e| Failure::new(FoxhStatus::ParseError, e.to_string()))?;
        let spec = raw
            .validate()
            .map_err(|e| Failure::new(FoxhStatus::InvalidSpec, e.to_string()))?;
        *out = Box::into_raw(Box::new(FoxhSpec { inner: spec }));
        Ok(())
    })
}

/// Releases a spec. NULL is ignored.
///
/// # Safety
/// `spec` must be NULL or a handle from `foxh_spec_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn foxh_spec_free(spec: *mut FoxhSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Writes the canonical JSON of `spec` into `buf` (NUL-terminated).
/// `*needed` receives the required size including the NUL; with a too small
/// buffer nothing is written and `BufferTooSmall` is returned.
///
/// # Safety
/// `spec` must be a live handle; `buf` must hold `len` bytes (may be NULL
/// when `len` is 0); `needed` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_spec_to_json(
    spec: *const FoxhSpec,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> FoxhStatus {
    guard(|| {
        let spec = non_null(spec, "spec")?;
        let text = spec.inner.to_json();
        let size = text.len() + 1;
        if let Some(n) = needed.as_mut() {
            *n = size;
        }
        if len < size || buf.is_null() {
            return Err(Failure::new(
                FoxhStatus::BufferTooSmall,
                format!("buffer of {len} bytes, {size} needed"),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `spec` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_spec_profile(spec: *const FoxhSpec, out: *mut FoxhProfile) -> FoxhStatus {
    guard(|| {
        let spec = non_null(spec, "spec")?;
        let out = out_ptr(out, "out")?;
        let p = spec.inner.profile();
        *out = FoxhProfile {
            a_star: p.a_star,
            c_min: p.c_min,
            c_max: p.c_max,
            sector_halfwidth: p.sector_halfwidth,
        };
        Ok(())
    })
}

/// Contour-quadrature value at `z = modulus · e^{i phase}` (phase not
/// reduced). `opts` may be NULL for defaults.
///
/// # Safety
/// `spec` must be a live handle; `opts` NULL or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_eval_contour(
    spec: *const FoxhSpec,
    modulus: f64,
    phase: f64,
    opts: *const FoxhOptions,
    out: *mut FoxhEvalResult,
) -> FoxhStatus {
    guard(|| {
        let spec = non_null(spec, "spec")?;
        let out = out_ptr(out, "out")?;
        let z = argument(modulus, phase)?;
        let r = evaluate_contour(&spec.inner, z, &options(opts)).map_err(eval_failure)?;
        fill(out, r);
        Ok(())
    })
}

/// Residue-series value; requires simple right poles and a convergent
/// series.
///
/// # Safety
/// As for `foxh_eval_contour`.
#[no_mangle]
pub unsafe extern "C" fn foxh_eval_series(
    spec: *const FoxhSpec,
    modulus: f64,
    phase: f64,
    opts: *const FoxhOptions,
    out: *mut FoxhEvalResult,
) -> FoxhStatus {
    guard(|| {
        let spec = non_null(spec, "spec")?;
        let out = out_ptr(out, "out")?;
        let z = argument(modulus, phase)?;
        let r = evaluate_series(&spec.inner, z, &options(opts)).map_err(eval_failure)?;
        fill(out, r);
        Ok(())
    })
}

/// Principal-branch `ln Γ(z)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_log_gamma(z: FoxhComplex, out: *mut FoxhComplex) -> FoxhStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let v = ln_gamma(Complex64::new(z.re, z.im)).map_err(|e| Failure::new(FoxhStatus::Pole, e.to_string()))?;
        *out = v.into();
        Ok(())
    })
}

/// Builds one of the identities "R1981", "RMULTI", "MAIN", "G41", "G42",
/// "G43" over `base`. The base handle is not consumed.
///
/// # Safety
/// `id` NUL-terminated; `params` valid; `base` a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_identity_build(
    id: *const c_char,
    params: *const FoxhParams,
    base: *const FoxhSpec,
    out: *mut *mut FoxhIdentity,
) -> FoxhStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let id: IdentityId = c_str(id, "id")?
            .parse()
            .map_err(|e: foxh::identities::UnknownIdentity| Failure::new(FoxhStatus::InvalidParams, e.to_string()))?;
        let p = non_null(params, "params")?;
        let base = non_null(base, "base")?;
        let params = IdentityParams::new(p.alpha, p.beta, p.lambda, p.delta, base.inner.clone());
        let case = build_identity(id, &params).map_err(identity_failure)?;
        *out = Box::into_raw(Box::new(FoxhIdentity { inner: case }));
        Ok(())
    })
}

/// Releases an identity case. NULL is ignored.
///
/// # Safety
/// `case` must be NULL or a handle from `foxh_identity_build` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn foxh_identity_free(case: *mut FoxhIdentity) {
    if !case.is_null() {
        drop(Box::from_raw(case));
    }
}

/// Largest base phase `φ` such that all terms are computable for
/// `|phase| < φ`.
///
/// # Safety
/// `case` a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_identity_admissible_phase(case: *const FoxhIdentity, out: *mut f64) -> FoxhStatus {
    guard(|| {
        let case = non_null(case, "case")?;
        let out = out_ptr(out, "out")?;
        *out = admissible_sector(&case.inner).map_err(identity_failure)?.max_phase;
        Ok(())
    })
}

/// Compares both sides at `count` arguments `moduli[k] · e^{i phases[k]}`.
/// Returns `Ok` when every sample passes, `VerificationFailed` otherwise;
/// the summary is filled in both cases.
///
/// # Safety
/// `case` a live handle; `moduli` and `phases` hold `count` values each
/// (may be NULL when `count` is 0); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn foxh_identity_verify(
    case: *const FoxhIdentity,
    moduli: *const f64,
    phases: *const f64,
    count: usize,
    tol: f64,
    out: *mut FoxhVerifySummary,
) -> FoxhStatus {
    guard(|| {
        let case = non_null(case, "case")?;
        let out = out_ptr(out, "out")?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::new(
                FoxhStatus::InvalidArgument,
                format!("tolerance must be positive, got {tol}"),
            ));
        }
        let samples = if count == 0 {
            Vec::new()
        } else {
            let m = std::slice::from_raw_parts(non_null(moduli, "moduli")?, count);
            let p = std::slice::from_raw_parts(non_null(phases, "phases")?, count);
            m.iter()
                .zip(p)
                .map(|(&m, &p)| argument(m, p))
                .collect::<Result<Vec<_>, _>>()?
        };
        let report = verify(&case.inner, &samples, tol, &QuadratureOptions::default());
        let failed = report.samples.iter().filter(|s| !s.passed).count();
        *out = FoxhVerifySummary {
            passed: report.passed(),
            samples: report.samples.len(),
            failed_samples: failed,
            worst_rel_residual: report.worst_rel_residual.unwrap_or(f64::NAN),
        };
        if report.passed() {
            Ok(())
        } else {
            let first = report
                .samples
                .iter()
                .find_map(|s| s.failure.clone())
                .unwrap_or_default();
            Err(Failure::new(
                FoxhStatus::VerificationFailed,
                format!("{failed} of {} samples failed; first: {first}", report.samples.len()),
            ))
        }
    })
}
