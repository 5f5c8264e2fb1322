#ifndef JSACC_H
#define JSACC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JsaccStatus {
  JSACC_STATUS_OK = 0,
  JSACC_STATUS_NULL_POINTER = 1,
  JSACC_STATUS_DOMAIN = 2,
  JSACC_STATUS_CONVERGENCE = 3,
  JSACC_STATUS_INVALID_PARAMETER = 4,
  JSACC_STATUS_DEGENERATE = 5,
  JSACC_STATUS_CONFIG = 6,
  JSACC_STATUS_USAGE = 7,
  JSACC_STATUS_IO = 8,
  JSACC_STATUS_INVALID_UTF8 = 9,
  /**
   * The requested metric has no closed form.
   */
  JSACC_STATUS_UNAVAILABLE = 10,
  JSACC_STATUS_PANIC = 11,
} JsaccStatus;

typedef enum JsaccMetric {
  JSACC_METRIC_OP_JSACC = 0,
  JSACC_METRIC_OP_SC = 1,
  JSACC_METRIC_ER_JSACC = 2,
  JSACC_METRIC_ER_SC = 3,
  JSACC_METRIC_ER_SC_CLAMPED = 4,
  JSACC_METRIC_SWITCH_PROB = 5,
  JSACC_METRIC_AMDEP = 6,
  JSACC_METRIC_SECURITY_RATE_FIXED = 7,
  JSACC_METRIC_SECURITY_RATE_ADAPTIVE = 8,
  JSACC_METRIC_OUTAGE_INCLUSION_VIOLATION = 9,
} JsaccMetric;

/**
 * Opaque parameter set.
 */
typedef struct JsaccParams JsaccParams;

/**
 * Monte Carlo estimate of one metric.
 */
typedef struct JsaccEstimate {
  double mean;
  double std_error;
  uint64_t n_trials;
} JsaccEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *jsacc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *jsacc_version(void);

/**
 * Default parameters with `num_elements` RIS elements and total power `total_power_w` (W).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum JsaccStatus jsacc_params_new_default(uint32_t num_elements,
                                          double total_power_w,
                                          struct JsaccParams **out);

/**
 * Parses a `key = value` parameter file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for one handle.
 */
enum JsaccStatus jsacc_params_from_config(const char *text, struct JsaccParams **out);

/**
 * # Safety
 * `params` must be null or a handle from this library that has not been freed.
 */
void jsacc_params_free(struct JsaccParams *params);

/**
 * # Safety
 * `params` must be a live handle and `out` valid for one handle.
 */
enum JsaccStatus jsacc_params_clone(const struct JsaccParams *params, struct JsaccParams **out);

/**
 * Rescales the total power so that `P_t / σ_B² = 10^{rho_db/10}`.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum JsaccStatus jsacc_params_set_rho_db(struct JsaccParams *params, double rho_db);

/**
 * Sets Alice's power and the jammer's maximum power, both in watts.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum JsaccStatus jsacc_params_set_powers(struct JsaccParams *params,
                                         double p_a_w,
                                         double p_j_max_w);

/**
 * Sets the fraction `xi` of the total power given to Alice.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum JsaccStatus jsacc_params_set_xi(struct JsaccParams *params, double xi);

/**
 * Sets the secrecy-rate switch threshold in bit/s.
 *
 * # Safety
 * `params` must be a live handle.
 */
enum JsaccStatus jsacc_params_set_switch_threshold(struct JsaccParams *params, double threshold);

/**
 * SNR `P_t / σ_B²` in dB.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one `double`.
 */
enum JsaccStatus jsacc_params_rho_db(const struct JsaccParams *params, double *out);

/**
 * Closed-form value of `metric`. When `asymptote` is non-null it receives the
 * high-SNR counterpart, or NaN if there is none.
 *
 * # Safety
 * `params` must be a live handle, `value` valid for one `double`, and
 * `asymptote` null or valid for one `double`.
 */
enum JsaccStatus jsacc_analytic(const struct JsaccParams *params,
                                enum JsaccMetric metric,
                                double *value,
                                double *asymptote);

/**
 * Monte Carlo estimate of `metric` over `trials` channel draws (at least 1000).
 *
 * # Safety
 * `params` must be a live handle and `out` valid for one [`JsaccEstimate`].
 */
enum JsaccStatus jsacc_estimate(const struct JsaccParams *params,
                                enum JsaccMetric metric,
                                uint64_t trials,
                                uint64_t seed,
                                struct JsaccEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JSACC_H */
