#ifndef IDGAL_H
#define IDGAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IdgalStatus {
  IdgalStatus_Ok = 0,
  /**
   * The check ran and did not pass.
   */
  IdgalStatus_Failed = 1,
  IdgalStatus_NullPointer = 2,
  IdgalStatus_InvalidUtf8 = 3,
  IdgalStatus_NotPrime = 4,
  IdgalStatus_Parse = 5,
  IdgalStatus_Precision = 6,
  IdgalStatus_Config = 7,
  IdgalStatus_Math = 8,
  IdgalStatus_Panic = 9,
} IdgalStatus;

/**
 * Truncated Laurent series over `F_p`.
 */
typedef struct IdgalSeries IdgalSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *idgal_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void idgal_string_free(char *s);

/**
 * `binom(a, n) mod p` for any integer `a`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum IdgalStatus idgal_lucas_binom(uint64_t p, int64_t a, uint64_t n, uint32_t *out);

/**
 * Parse a literal such as `1*t^-2 + 1*t^3`.
 *
 * # Safety
 * `literal` must be a nul-terminated string, `out` valid for writes.
 */
enum IdgalStatus idgal_series_parse(uint64_t p, const char *literal, struct IdgalSeries **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void idgal_series_free(struct IdgalSeries *s);

/**
 * `theta^(n)(s)` as a new handle.
 *
 * # Safety
 * `s` must be a live handle, `out` valid for writes.
 */
enum IdgalStatus idgal_series_theta(const struct IdgalSeries *s,
                                    uint64_t n,
                                    struct IdgalSeries **out);

/**
 * Product of two series as a new handle.
 *
 * # Safety
 * `a`, `b` must be live handles, `out` valid for writes.
 */
enum IdgalStatus idgal_series_mul(const struct IdgalSeries *a,
                                  const struct IdgalSeries *b,
                                  struct IdgalSeries **out);

/**
 * Coefficient of `t^e`; `Precision` at or beyond the truncation.
 *
 * # Safety
 * `s` must be a live handle, `out` valid for writes.
 */
enum IdgalStatus idgal_series_coeff(const struct IdgalSeries *s, int64_t e, uint32_t *out);

/**
 * Series literal, freed with [`idgal_string_free`].
 *
 * # Safety
 * `s` must be a live handle, `out` valid for writes.
 */
enum IdgalStatus idgal_series_to_string(const struct IdgalSeries *s, char **out);

/**
 * Validate an IDE file's contents to `order`; `report_json` receives the
 * report. Returns `Failed` when the equation is not compatible.
 *
 * # Safety
 * `ide_json` must be a nul-terminated string, `report_json` valid for writes.
 */
enum IdgalStatus idgal_ide_check_json(const char *ide_json, uint64_t order, char **report_json);

/**
 * Run a suite config; `report_json` receives the suite report.
 *
 * # Safety
 * `config_json` must be a nul-terminated string, `report_json` valid for writes.
 */
enum IdgalStatus idgal_run_suite_json(const char *config_json, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDGAL_H */
