#ifndef QSTANCU_H
#define QSTANCU_H

/* Generated by cbindgen from the qstancu-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QstancuStatus {
  QSTANCU_STATUS_OK = 0,
  QSTANCU_STATUS_NULL_POINTER = 1,
  QSTANCU_STATUS_INVALID_ARGUMENT = 2,
  QSTANCU_STATUS_DEGENERATE_POINT = 3,
  QSTANCU_STATUS_UNSUPPORTED = 4,
  QSTANCU_STATUS_BUFFER_TOO_SMALL = 5,
  QSTANCU_STATUS_PARSE_ERROR = 6,
  QSTANCU_STATUS_PANIC = 7,
} QstancuStatus;

/**
 * A parsed function spec such as `"e2"`, `"poly:1,0,-1"` or `"exp"`.
 */
typedef struct QstancuFunction QstancuFunction;

/**
 * `q` and `alpha` in double precision.
 */
typedef struct QstancuParams QstancuParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *qstancu_last_error_message(void);

/**
 * Creates a parameter handle; requires `0 < q < 1` and `alpha >= 0`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum QstancuStatus qstancu_params_new(double q, double alpha, struct QstancuParams **out);

/**
 * # Safety
 * `params` must be null or a handle from [`qstancu_params_new`] not yet freed.
 */
void qstancu_params_free(struct QstancuParams *params);

/**
 * Parses a function spec.
 *
 * # Safety
 * `spec` must be null or a NUL-terminated string; `out` must be null or
 * valid for writing one pointer.
 */
enum QstancuStatus qstancu_function_parse(const char *spec, struct QstancuFunction **out);

/**
 * # Safety
 * `f` must be null or a handle from [`qstancu_function_parse`] not yet freed.
 */
void qstancu_function_free(struct QstancuFunction *f);

/**
 * Writes `p_{n,0}(x) .. p_{n,n}(x)` to `out[0..=n]`; `len` must be at least `n + 1`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be valid for `len` doubles.
 */
enum QstancuStatus qstancu_basis(const struct QstancuParams *params,
                                 size_t n,
                                 double x,
                                 double *out,
                                 size_t len);

/**
 * `S_n(f; x)`.
 *
 * # Safety
 * `params` and `f` must be live handles; `out` must be valid for one double.
 */
enum QstancuStatus qstancu_apply(const struct QstancuParams *params,
                                 size_t n,
                                 const struct QstancuFunction *f,
                                 double x,
                                 double *out);

/**
 * `S_n(e_m; x)` for `m` in `{0, 1, 2}`.
 *
 * # Safety
 * `params` must be a live handle; `out` must be valid for one double.
 */
enum QstancuStatus qstancu_moment_closed_form(const struct QstancuParams *params,
                                              size_t n,
                                              size_t m,
                                              double x,
                                              double *out);

/**
 * `S_inf(f; x)` and a bound on its error. The bound is infinite when `x`
 * was close enough to 1 to be evaluated as `f(1)`.
 *
 * # Safety
 * `params` and `f` must be live handles; `value` and `tail_bound` must be
 * valid for one double each.
 */
enum QstancuStatus qstancu_limit_apply(const struct QstancuParams *params,
                                       const struct QstancuFunction *f,
                                       double x,
                                       double tail_tol,
                                       double *value,
                                       double *tail_bound);

/**
 * `S_inf(e_m; x)` from its finite closed form.
 *
 * # Safety
 * `params` must be a live handle; `out` must be valid for one double.
 */
enum QstancuStatus qstancu_limit_moment(const struct QstancuParams *params,
                                        size_t m,
                                        double x,
                                        double *out);

/**
 * Truncated `(a; q)_inf` for `a` in `[0, 1]` with its error bound.
 *
 * # Safety
 * `value` and `tail_bound` must be valid for one double each.
 */
enum QstancuStatus qstancu_q_pochhammer_infinite(double a,
                                                 double q,
                                                 double tail_tol,
                                                 double *value,
                                                 double *tail_bound);

/**
 * `S_n(f; x)` in exact rational arithmetic. `q`, `alpha` and `x` are
 * strings such as `"1/2"` or `"0.25"`; the result is written as a new
 * `"p/q"` string that must be released with [`qstancu_string_free`].
 *
 * # Safety
 * The input pointers must be NUL-terminated strings; `out` must be valid for
 * writing one pointer.
 */
enum QstancuStatus qstancu_apply_exact(const char *q,
                                       const char *alpha,
                                       size_t n,
                                       const char *spec,
                                       const char *x,
                                       char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void qstancu_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSTANCU_H */
