#ifndef HYPERCERT_H
#define HYPERCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcClassification {
  HC_CLASSIFICATION_TERMINATING = 0,
  HC_CLASSIFICATION_NONTERMINATING_CONVERGENT = 1,
  HC_CLASSIFICATION_NONTERMINATING_DIVERGENT = 2,
  HC_CLASSIFICATION_ILL_POSED = 3,
} HcClassification;

/**
 * Which exact value of a report to read.
 */
typedef enum HcReportField {
  HC_REPORT_FIELD_DIRECT = 0,
  HC_REPORT_FIELD_VIA_SERIES = 1,
  HC_REPORT_FIELD_VIA_WHIPPLE = 2,
} HcReportField;

/**
 * Result codes. Zero is success.
 */
typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_INVALID_UTF8 = 2,
  HC_STATUS_PARSE = 3,
  HC_STATUS_NOT_TERMINATING = 4,
  HC_STATUS_POLE = 5,
  HC_STATUS_DIVERGENT = 6,
  HC_STATUS_NOT_CONVERGED = 7,
  HC_STATUS_NOT_REPRESENTABLE = 8,
  HC_STATUS_NO_MATCH = 9,
  HC_STATUS_DOMAIN = 10,
  HC_STATUS_PRECONDITION = 11,
  HC_STATUS_PATHWAY = 12,
  HC_STATUS_NOT_FACTORABLE = 13,
  HC_STATUS_INVALID_ARGUMENT = 14,
} HcStatus;

/**
 * Opaque identity report.
 */
typedef struct HcReport HcReport;

/**
 * Opaque pFq series.
 */
typedef struct HcSeries HcSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hc_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void hc_string_free(char *s);

/**
 * Builds a series from comma-separated rational lists (`"-3,5/2"`, `""` for none).
 *
 * # Safety
 * String arguments are valid C strings; `out` is valid for writes.
 */
enum HcStatus hc_series_new(const char *upper,
                            const char *lower,
                            const char *z,
                            struct HcSeries **out);

/**
 * # Safety
 * `s` is null or a live series handle; it must not be used afterwards.
 */
void hc_series_free(struct HcSeries *s);

/**
 * Canonical text form, e.g. `4F3([-1, 2, 5/2, 3]; [3/2, 2, 5]; -1)`.
 *
 * # Safety
 * `s` is a live series handle; `out` is valid for writes.
 */
enum HcStatus hc_series_to_string(const struct HcSeries *s, char **out);

/**
 * Writes the classification kind and its index (termination or pole index;
 * 0 for the nonterminating kinds).
 *
 * # Safety
 * `s` is a live series handle; output pointers are valid for writes.
 */
enum HcStatus hc_series_classify(const struct HcSeries *s,
                                 enum HcClassification *kind,
                                 uint64_t *index);

/**
 * Exact sum of a terminating series as a `"p/q"` string.
 *
 * # Safety
 * `s` is a live series handle; `out` is valid for writes.
 */
enum HcStatus hc_series_eval_exact(const struct HcSeries *s, char **out);

/**
 * Floating-point sum with truncation tolerance `tol`.
 *
 * # Safety
 * `s` is a live series handle; `out` is valid for writes.
 */
enum HcStatus hc_series_eval_numeric(const struct HcSeries *s, double tol, double *out);

/**
 * Matches Whipple's shape and writes the exact closed form.
 *
 * # Safety
 * `s` is a live series handle; `out` is valid for writes.
 */
enum HcStatus hc_whipple_rhs_exact(const struct HcSeries *s, char **out);

/**
 * Matches Whipple's shape and writes the log-Gamma closed form.
 *
 * # Safety
 * `s` is a live series handle; `out` is valid for writes.
 */
enum HcStatus hc_whipple_rhs_numeric(const struct HcSeries *s, double *out);

/**
 * `ln Γ(x)` for `x > 0`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum HcStatus hc_log_gamma(double x, double *out);

/**
 * Recognizes the term with ratio `num(n)/den(n)` (ascending integer
 * coefficient lists) and initial term `t0`. Writes the prefactor string and
 * a new series handle.
 *
 * # Safety
 * String arguments are valid C strings; output pointers are valid for writes.
 */
enum HcStatus hc_recognize(const char *num,
                           const char *den,
                           const char *t0,
                           char **prefactor,
                           struct HcSeries **series);

/**
 * Certifies the binomial identity at `(k, m)`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum HcStatus hc_verify(uint64_t k, uint64_t m, struct HcReport **out);

/**
 * # Safety
 * `r` is null or a live report handle; it must not be used afterwards.
 */
void hc_report_free(struct HcReport *r);

/**
 * True when all three pathways equal 1. False for a null handle.
 *
 * # Safety
 * `r` is null or a live report handle.
 */
bool hc_report_all_equal_one(const struct HcReport *r);

/**
 * # Safety
 * `r` is a live report handle; `out` is valid for writes.
 */
enum HcStatus hc_report_field(const struct HcReport *r, enum HcReportField field, char **out);

/**
 * The CLI's `sweep --format json` document for `0 <= m <= k <= k_max`.
 * `jobs = 0` uses all available threads. Returns `Pathway` (with the
 * document still written) when some report fails.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum HcStatus hc_sweep_json(uint64_t k_max, uint32_t jobs, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERCERT_H */
