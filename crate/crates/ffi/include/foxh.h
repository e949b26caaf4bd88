#ifndef FOXH_H
#define FOXH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FoxhStatus {
  FOXH_STATUS_OK = 0,
  FOXH_STATUS_NULL_POINTER = 1,
  FOXH_STATUS_INVALID_UTF8 = 2,
  FOXH_STATUS_PARSE_ERROR = 3,
  FOXH_STATUS_INVALID_SPEC = 4,
  FOXH_STATUS_INVALID_ARGUMENT = 5,
  FOXH_STATUS_OUTSIDE_SECTOR = 6,
  FOXH_STATUS_BUDGET_EXCEEDED = 7,
  FOXH_STATUS_SERIES_UNAVAILABLE = 8,
  FOXH_STATUS_POLE = 9,
  FOXH_STATUS_INVALID_PARAMS = 10,
  FOXH_STATUS_EMPTY_REGION = 11,
  FOXH_STATUS_VERIFICATION_FAILED = 12,
  FOXH_STATUS_BUFFER_TOO_SMALL = 13,
  FOXH_STATUS_PANIC = 14,
} FoxhStatus;

/**
 * Opaque identity case.
 */
typedef struct FoxhIdentity FoxhIdentity;

/**
 * Opaque validated H-function spec.
 */
typedef struct FoxhSpec FoxhSpec;

typedef struct FoxhProfile {
  double a_star;
  /**
   * `-INFINITY` when unbounded.
   */
  double c_min;
  /**
   * `INFINITY` when unbounded.
   */
  double c_max;
  double sector_halfwidth;
} FoxhProfile;

/**
 * `rel_tol <= 0` or `max_nodes == 0` select the defaults (1e-10, 200000).
 */
typedef struct FoxhOptions {
  double rel_tol;
  uintptr_t max_nodes;
} FoxhOptions;

typedef struct FoxhComplex {
  double re;
  double im;
} FoxhComplex;

typedef struct FoxhEvalResult {
  struct FoxhComplex value;
  double error_estimate;
  uintptr_t nodes_used;
  /**
   * Contour abscissa; NaN for series results.
   */
  double abscissa;
  /**
   * Contour half-length; NaN for series results.
   */
  double truncation;
} FoxhEvalResult;

typedef struct FoxhParams {
  double alpha;
  double beta;
  double lambda;
  double delta;
} FoxhParams;

typedef struct FoxhVerifySummary {
  bool passed;
  uintptr_t samples;
  uintptr_t failed_samples;
  /**
   * NaN when no sample produced a residual.
   */
  double worst_rel_residual;
} FoxhVerifySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful call. Valid until the next `foxh_*` call on the same thread.
 */
const char *foxh_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *foxh_version(void);

/**
 * Parses and validates a spec in the JSON format
 * `{"m":..,"n":..,"upper":[[re,im,weight],..],"lower":[..]}`.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must point to writable storage.
 */
enum FoxhStatus foxh_spec_from_json(const char *json, struct FoxhSpec **out);

/**
 * Releases a spec. NULL is ignored.
 *
 * # Safety
 * `spec` must be NULL or a handle from `foxh_spec_from_json` not yet freed.
 */
void foxh_spec_free(struct FoxhSpec *spec);

/**
 * Writes the canonical JSON of `spec` into `buf` (NUL-terminated).
 * `*needed` receives the required size including the NUL; with a too small
 * buffer nothing is written and `BufferTooSmall` is returned.
 *
 * # Safety
 * `spec` must be a live handle; `buf` must hold `len` bytes (may be NULL
 * when `len` is 0); `needed` must be NULL or writable.
 */
enum FoxhStatus foxh_spec_to_json(const struct FoxhSpec *spec,
                                  char *buf,
                                  uintptr_t len,
                                  uintptr_t *needed);

/**
 * # Safety
 * `spec` must be a live handle; `out` writable.
 */
enum FoxhStatus foxh_spec_profile(const struct FoxhSpec *spec, struct FoxhProfile *out);

/**
 * Contour-quadrature value at `z = modulus · e^{i phase}` (phase not
 * reduced). `opts` may be NULL for defaults.
 *
 * # Safety
 * `spec` must be a live handle; `opts` NULL or valid; `out` writable.
 */
enum FoxhStatus foxh_eval_contour(const struct FoxhSpec *spec,
                                  double modulus,
                                  double phase,
                                  const struct FoxhOptions *opts,
                                  struct FoxhEvalResult *out);

/**
 * Residue-series value; requires simple right poles and a convergent
 * series.
 *
 * # Safety
 * As for `foxh_eval_contour`.
 */
enum FoxhStatus foxh_eval_series(const struct FoxhSpec *spec,
                                 double modulus,
                                 double phase,
                                 const struct FoxhOptions *opts,
                                 struct FoxhEvalResult *out);

/**
 * Principal-branch `ln Γ(z)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FoxhStatus foxh_log_gamma(struct FoxhComplex z, struct FoxhComplex *out);

/**
 * Builds one of the identities "R1981", "RMULTI", "MAIN", "G41", "G42",
 * "G43" over `base`. The base handle is not consumed.
 *
 * # Safety
 * `id` NUL-terminated; `params` valid; `base` a live handle; `out` writable.
 */
enum FoxhStatus foxh_identity_build(const char *id,
                                    const struct FoxhParams *params,
                                    const struct FoxhSpec *base,
                                    struct FoxhIdentity **out);

/**
 * Releases an identity case. NULL is ignored.
 *
 * # Safety
 * `case` must be NULL or a handle from `foxh_identity_build` not yet freed.
 */
void foxh_identity_free(struct FoxhIdentity *case_);

/**
 * Largest base phase `φ` such that all terms are computable for
 * `|phase| < φ`.
 *
 * # Safety
 * `case` a live handle; `out` writable.
 */
enum FoxhStatus foxh_identity_admissible_phase(const struct FoxhIdentity *case_, double *out);

/**
 * Compares both sides at `count` arguments `moduli[k] · e^{i phases[k]}`.
 * Returns `Ok` when every sample passes, `VerificationFailed` otherwise;
 * the summary is filled in both cases.
 *
 * # Safety
 * `case` a live handle; `moduli` and `phases` hold `count` values each
 * (may be NULL when `count` is 0); `out` writable.
 */
enum FoxhStatus foxh_identity_verify(const struct FoxhIdentity *case_,
                                     const double *moduli,
                                     const double *phases,
                                     uintptr_t count,
                                     double tol,
                                     struct FoxhVerifySummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOXH_H */
