#ifndef AIECON_H
#define AIECON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes. `Ok` is zero; everything else is a failure.
typedef enum AieStatus {
  AIE_STATUS_OK = 0,
  AIE_STATUS_NULL_POINTER = 1,
  AIE_STATUS_INVALID_UTF8 = 2,
  AIE_STATUS_PARSE = 3,
  AIE_STATUS_DUPLICATE_KEY = 4,
  AIE_STATUS_SCHEMA = 5,
  AIE_STATUS_MISSING_INDICATOR = 6,
  AIE_STATUS_DEGENERATE_WEIGHTS = 7,
  AIE_STATUS_NEGATIVE_FACTOR = 8,
  AIE_STATUS_ZERO_FACTOR = 9,
  AIE_STATUS_EMPTY_INPUT = 10,
  AIE_STATUS_OUT_OF_RANGE = 11,
  AIE_STATUS_NON_POSITIVE_VALUE = 12,
  AIE_STATUS_DEGENERATE_SERIES = 13,
  AIE_STATUS_INVALID_ARGUMENT = 14,
  AIE_STATUS_INTEGRITY = 15,
  AIE_STATUS_IO = 16,
  AIE_STATUS_PANIC = 99,
} AieStatus;

// Zero-factor handling for the geometric mean.
typedef enum AieZeroPolicy {
  AIE_ZERO_POLICY_REJECT = 0,
  AIE_ZERO_POLICY_EXCLUDE = 1,
  // Zeros are replaced by the accompanying `epsilon` argument.
  AIE_ZERO_POLICY_EPSILON = 2,
} AieZeroPolicy;

typedef enum AieAuditVerdict {
  AIE_AUDIT_VERDICT_CONSISTENT = 0,
  AIE_AUDIT_VERDICT_INCONSISTENT = 1,
  AIE_AUDIT_VERDICT_PERFECT_FIT = 2,
} AieAuditVerdict;

// Opaque parsed indicator panel.
typedef struct AiePanel AiePanel;

// Opaque reproduction report.
typedef struct AieReport AieReport;

// Output of [`aiecon_regress_loglog`]. `t_stat` and `p_value` are NaN when
// `perfect_fit` is set.
typedef struct AieRegression {
  double slope_b1;
  double intercept_b0;
  double pearson_r;
  double r_squared;
  double t_stat;
  double p_value;
  uint64_t df;
  size_t n;
  bool perfect_fit;
} AieRegression;

// Output of [`aiecon_audit`]. Implied values are NaN for a perfect fit.
typedef struct AieAudit {
  double implied_abs_t;
  double implied_p;
  double p_ratio;
  double p_relative_diff;
  uint64_t df;
  enum AieAuditVerdict verdict;
} AieAudit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. Valid until the next
// call into this library on the same thread.
const char *aiecon_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *aiecon_version(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void aiecon_string_free(char *s);

// Parses a panel CSV (`country,indicator,year,value`).
//
// # Safety
// `csv` must be a valid NUL-terminated string; `out` must be writable.
enum AieStatus aiecon_panel_parse(const char *csv, bool lenient, struct AiePanel **out);

// # Safety
// `panel` must be null or a handle from [`aiecon_panel_parse`] not yet freed.
void aiecon_panel_free(struct AiePanel *panel);

// Number of observations, or 0 for a null handle.
//
// # Safety
// `panel` must be null or a live handle.
size_t aiecon_panel_len(const struct AiePanel *panel);

// Number of distinct countries, or 0 for a null handle.
//
// # Safety
// `panel` must be null or a live handle.
size_t aiecon_panel_country_count(const struct AiePanel *panel);

// Technology level of `country`: uniform average of the six canonical factors
// over `[year_start, year_end]`, then their geometric mean.
//
// # Safety
// `panel` must be a live handle, `country` a NUL-terminated string and
// `out_value` writable.
enum AieStatus aiecon_technology_level(const struct AiePanel *panel,
                                       const char *country,
                                       int32_t year_start,
                                       int32_t year_end,
                                       enum AieZeroPolicy policy,
                                       double epsilon,
                                       double *out_value);

// Geometric mean of `len` factors.
//
// # Safety
// `factors` must point to `len` readable doubles; `out_value` must be writable.
enum AieStatus aiecon_geometric_mean(const double *factors,
                                     size_t len,
                                     enum AieZeroPolicy policy,
                                     double epsilon,
                                     double *out_value);

// Euclidean magnitude of a six-component AI factor vector (technological
// development, adoption, workforce, productivity, market demand, regulatory
// environment). Rate components must be fractions in `[0, 1]`.
//
// # Safety
// `components` must point to 6 readable doubles; `out_value` must be writable.
enum AieStatus aiecon_vector_magnitude(const double *components, double *out_value);

// Natural-log transform of both series, then OLS, Pearson r, r² and the
// two-sided slope t-test.
//
// # Safety
// `x` and `y` must each point to `n` readable doubles; `out` must be writable.
enum AieStatus aiecon_regress_loglog(const double *x,
                                     const double *y,
                                     size_t n,
                                     struct AieRegression *out);

// P(T > t) for Student's t with `df` degrees of freedom; NaN when `df` is 0.
double aiecon_student_t_sf(double t, uint64_t df);

// 2 · P(T > |t|); NaN when `df` is 0.
double aiecon_two_sided_p(double t, uint64_t df);

// Consistency of a reported (n, r², p) triple with the slope t-test.
//
// # Safety
// `out` must be writable.
enum AieStatus aiecon_audit(size_t n,
                            double r_squared,
                            double p_value,
                            double tolerance,
                            struct AieAudit *out);

// Reproduces the reference tables from the bundled fixture.
//
// # Safety
// `out` must be writable.
enum AieStatus aiecon_reproduce(struct AieReport **out);

// True iff every non-excluded entry passed. False for a null handle.
//
// # Safety
// `report` must be null or a live handle.
bool aiecon_report_passed(const struct AieReport *report);

// Number of per-cell entries, or 0 for a null handle.
//
// # Safety
// `report` must be null or a live handle.
size_t aiecon_report_entry_count(const struct AieReport *report);

// The report as JSON; free with [`aiecon_string_free`]. Null on failure.
//
// # Safety
// `report` must be a live handle.
char *aiecon_report_json(const struct AieReport *report);

// # Safety
// `report` must be null or a handle from [`aiecon_reproduce`] not yet freed.
void aiecon_report_free(struct AieReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AIECON_H */
