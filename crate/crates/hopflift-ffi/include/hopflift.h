/* C ABI for hopflift: spinor/gauge-potential lifts, fixed-point iteration, and residual verification of singular Seiberg-Witten and Freund solutions. */

#ifndef HOPFLIFT_H
#define HOPFLIFT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum HlStatus {
  HlStatus_Ok = 0,
  HlStatus_NullPointer = 1,
  HlStatus_InvalidUtf8 = 2,
  HlStatus_ParseError = 3,
  HlStatus_EvalError = 4,
  HlStatus_InvalidArgument = 5,
  /**
   * The iteration ran but did not converge (size blowup, iteration cap,
   * or evaluation failure); the trace JSON still describes the run.
   */
  HlStatus_NotConverged = 6,
  /**
   * Verification ran and the report is available, but some residual
   * exceeded its threshold.
   */
  HlStatus_VerifyFailed = 7,
  HlStatus_InternalError = 8,
} HlStatus;

/**
 * Opaque expression handle.
 */
typedef struct HlExpr HlExpr;

/**
 * Opaque vector-field handle.
 */
typedef struct HlField HlField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *hl_version(void);

/**
 * Last error message for this thread, or null when no error is recorded.
 * The returned string is owned by the library until the next failing call
 * on this thread; copy it if it must outlive that.
 */
const char *hl_last_error_message(void);

/**
 * Free a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `hl_*` call that transfers string
 * ownership and must not have been freed already.
 */
void hl_string_free(char *s);

/**
 * Parse an expression in the library grammar into a new handle.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum HlStatus hl_expr_parse(const char *src, struct HlExpr **out);

/**
 * Release an expression handle.
 *
 * # Safety
 * `expr` must be a handle from this library, not yet freed.
 */
void hl_expr_free(struct HlExpr *expr);

/**
 * Print an expression in the re-ingestible grammar. Free the result with
 * `hl_string_free`.
 *
 * # Safety
 * `expr` must be a live handle; `out` must be valid.
 */
enum HlStatus hl_expr_print(const struct HlExpr *expr, char **out);

/**
 * Tree node count of an expression (0 on null).
 *
 * # Safety
 * `expr` must be a live handle or null.
 */
uint64_t hl_expr_node_count(const struct HlExpr *expr);

/**
 * Exact symbolic derivative with respect to `var`.
 *
 * # Safety
 * `expr` must be a live handle; `var` a NUL-terminated string; `out` valid.
 */
enum HlStatus hl_expr_differentiate(const struct HlExpr *expr,
                                    const char *var,
                                    struct HlExpr **out);

/**
 * Value-preserving simplification; `positive_domain` enables the rules
 * valid on the positive octant.
 *
 * # Safety
 * `expr` must be a live handle; `out` valid.
 */
enum HlStatus hl_expr_simplify(const struct HlExpr *expr,
                               bool positive_domain,
                               struct HlExpr **out);

/**
 * Evaluate an expression at a binding given as parallel arrays of `count`
 * identifier names and complex values. Every free identifier must be
 * bound; `pi` is pre-bound.
 *
 * # Safety
 * All array pointers must be valid for `count` elements; strings must be
 * NUL-terminated; output pointers must be valid.
 */
enum HlStatus hl_expr_evaluate(const struct HlExpr *expr,
                               const char *const *names,
                               const double *values_re,
                               const double *values_im,
                               uintptr_t count,
                               double *out_re,
                               double *out_im);

/**
 * Parse three component expressions into a vector-field handle. Named
 * constants declared in `config_json` (the `params` object) are allowed.
 *
 * # Safety
 * Component strings must be NUL-terminated; `out` must be valid.
 */
enum HlStatus hl_field_parse(const char *hx,
                             const char *hy,
                             const char *hz,
                             const char *config_json,
                             struct HlField **out);

/**
 * Release a field handle.
 *
 * # Safety
 * `field` must be a handle from this library, not yet freed.
 */
void hl_field_free(struct HlField *field);

/**
 * Run the fixed-point iteration from a seed field. `system` is 0 for
 * Seiberg-Witten, 1 for Freund. On return the trace JSON is written to
 * `out_trace_json` whenever the run executed (even without convergence);
 * on convergence the solution tuple JSON is written to `out_solution_json`
 * when that pointer is non-null. Timings are zeroed for reproducibility.
 *
 * # Safety
 * `field` must be a live handle; output pointers must be valid or null
 * (`out_solution_json` only).
 */
enum HlStatus hl_iterate_run(const struct HlField *field,
                             int32_t system,
                             const char *config_json,
                             char **out_trace_json,
                             char **out_solution_json);

/**
 * Verify a candidate generating field against the chosen system; the
 * report JSON is written whenever verification ran. Returns `Ok` only
 * when every residual passes.
 *
 * # Safety
 * `field` must be a live handle; `out_report_json` must be valid.
 */
enum HlStatus hl_verify_solution(const struct HlField *field,
                                 int32_t system,
                                 const char *config_json,
                                 char **out_report_json);

/**
 * Loop holonomy of a potential field around the horizontal unit circle at
 * height `z0`, with `nodes >= 64` quadrature nodes.
 *
 * # Safety
 * `field` must be a live handle; output pointers must be valid.
 */
enum HlStatus hl_holonomy_unit_circle(const struct HlField *field,
                                      double z0,
                                      uintptr_t nodes,
                                      double *out_value,
                                      double *out_error_estimate);

/**
 * Closed-form value of the z^n planar family B = n^2/(rho^2 sin^2(n phi)).
 * The order is `num/den` and must be a positive half-integer.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HlStatus hl_liouville_zn(int64_t num, int64_t den, double rho, double phi, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPFLIFT_H */
