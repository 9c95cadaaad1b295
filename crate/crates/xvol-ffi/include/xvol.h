/* C interface to the xvol library. Generated by cbindgen from crates/xvol-ffi; do not edit. */

#ifndef XVOL_H
#define XVOL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Estimator selector for [`xvol_estimate`].
 */
enum XvolMethod
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  XVOL_METHOD_NAIVE = 0,
  XVOL_METHOD_RAO_BLACKWELL = 1,
};
#ifndef __cplusplus
typedef int32_t XvolMethod;
#endif // __cplusplus

/**
 * Result of every FFI call.
 */
enum XvolStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  XVOL_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  XVOL_STATUS_NULL_POINTER = 1,
  /**
   * Arguments outside the supported domain (dimensions below 2, sample
   * counts below 2, unknown method, zero workers).
   */
  XVOL_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A caller-provided buffer is too small; `written` holds the needed size.
   */
  XVOL_STATUS_BUFFER_TOO_SMALL = 3,
  /**
   * Unexpected internal failure.
   */
  XVOL_STATUS_INTERNAL_ERROR = 4,
};
#ifndef __cplusplus
typedef int32_t XvolStatus;
#endif // __cplusplus

/**
 * Opaque partial-transpose classification handle.
 */
typedef struct XvolClassification XvolClassification;

/**
 * Opaque seeded sampler handle.
 */
typedef struct XvolSampler XvolSampler;

/**
 * One Monte Carlo result.
 */
typedef struct XvolEstimate {
  double mean;
  double std_error;
  /**
   * Exact ratio as a double, the z-score reference.
   */
  double analytic;
  double z_score;
  uint64_t count;
  uint64_t seed;
} XvolEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Exact PPT-to-total volume ratio (2/5)^(⌊m/2⌋·⌊n/2⌋) as a double.
 *
 * # Safety
 * `out_value` must be NULL or point to a writable double.
 */
XvolStatus xvol_ratio(uint32_t m, uint32_t n, double *out_value);

/**
 * Exact ratio as a "numerator/denominator" string.
 *
 * # Safety
 * `buf` must be NULL or point to `cap` writable bytes; `written` must be
 * NULL or point to a writable size_t.
 */
XvolStatus xvol_ratio_string(uint32_t m, uint32_t n, char *buf, size_t cap, size_t *written);

/**
 * Body volume of the m×n X-states: exact rational coefficient (written as
 * "numerator/denominator") and the power of π it multiplies.
 *
 * # Safety
 * Pointer arguments must be NULL or valid for writes as documented on
 * [`xvol_ratio_string`].
 */
XvolStatus xvol_volume_x(uint32_t m,
                         uint32_t n,
                         uint32_t *out_pi_power,
                         char *coeff_buf,
                         size_t coeff_cap,
                         size_t *coeff_written);

/**
 * PPT volume, same encoding as [`xvol_volume_x`].
 *
 * # Safety
 * Same contract as [`xvol_volume_x`].
 */
XvolStatus xvol_volume_ppt(uint32_t m,
                           uint32_t n,
                           uint32_t *out_pi_power,
                           char *coeff_buf,
                           size_t coeff_cap,
                           size_t *coeff_written);

/**
 * Builds the partial-transpose classification for (m, n). The handle must
 * be released with [`xvol_classification_free`].
 *
 * # Safety
 * `out` must be NULL or point to a writable pointer slot.
 */
XvolStatus xvol_classification_new(uint32_t m, uint32_t n, struct XvolClassification **out);

/**
 * # Safety
 * `handle` must come from [`xvol_classification_new`] and not be freed twice.
 */
void xvol_classification_free(struct XvolClassification *handle);

/**
 * Counts A (quadruples), B (fixed pairs), C (center flag).
 *
 * # Safety
 * `handle` must be a live classification handle.
 */
XvolStatus xvol_classification_counts(const struct XvolClassification *handle,
                                      uint32_t *out_a,
                                      uint32_t *out_b,
                                      uint32_t *out_c);

/**
 * Full classification as JSON:
 * `{m, n, A, B, C, quadruples, fixed_pairs, center}`.
 *
 * # Safety
 * `handle` must be a live classification handle.
 */
XvolStatus xvol_classification_json(const struct XvolClassification *handle,
                                    char *buf,
                                    size_t cap,
                                    size_t *written);

/**
 * Creates a sampler for Hilbert-Schmidt-uniform X-states. States are read
 * out with [`xvol_sampler_next`]; release with [`xvol_sampler_free`].
 *
 * # Safety
 * `out` must be NULL or point to a writable pointer slot.
 */
XvolStatus xvol_sampler_new(uint32_t m, uint32_t n, uint64_t seed, struct XvolSampler **out);

/**
 * # Safety
 * `handle` must come from [`xvol_sampler_new`] and not be freed twice.
 */
void xvol_sampler_free(struct XvolSampler *handle);

/**
 * Draws the next state. `diag` receives mn entries; `offdiag` receives
 * ⌊mn/2⌋ complex entries interleaved as (re, im), i.e. 2⌊mn/2⌋ doubles.
 * `diag_len`/`offdiag_len` are the capacities in doubles.
 *
 * # Safety
 * `handle` must be a live sampler handle; the output slices must point to
 * writable memory of the stated lengths.
 */
XvolStatus xvol_sampler_next(struct XvolSampler *handle,
                             double *diag,
                             size_t diag_len,
                             double *offdiag,
                             size_t offdiag_len);

/**
 * Runs a Monte Carlo estimate of the PPT fraction. `workers` threads are
 * used; the result is bit-identical for any worker count.
 *
 * # Safety
 * `out` must be NULL or point to a writable [`XvolEstimate`].
 */
XvolStatus xvol_estimate(uint32_t m,
                         uint32_t n,
                         uint64_t samples,
                         uint64_t seed,
                         XvolMethod method,
                         uint32_t workers,
                         struct XvolEstimate *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *xvol_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* XVOL_H */
