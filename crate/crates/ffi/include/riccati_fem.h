#ifndef RICCATI_FEM_H
#define RICCATI_FEM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum RfStatus {
  RF_STATUS_OK = 0,
  RF_STATUS_NULL_POINTER = 1,
  RF_STATUS_INVALID_ARGUMENT = 2,
  RF_STATUS_DIMENSION_MISMATCH = 3,
  RF_STATUS_NOT_CONVERGED = 4,
  RF_STATUS_UNSTABLE = 5,
  RF_STATUS_SINGULAR = 6,
  RF_STATUS_IO = 7,
  RF_STATUS_PANIC = 8,
} RfStatus;

/**
 * Dense row-major matrix.
 */
typedef struct RfMatrix RfMatrix;

/**
 * Outcome of a convergence study.
 */
typedef struct RfStudyResult RfStudyResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *rf_last_error(void);

/**
 * Creates a `rows x cols` matrix from row-major `data`; `data` may be null
 * for a zero matrix.
 *
 * # Safety
 * `data` must point to `rows * cols` doubles when non-null; `out` must be
 * a valid pointer.
 */
enum RfStatus rf_matrix_new(uintptr_t rows,
                            uintptr_t cols,
                            const double *data,
                            struct RfMatrix **out);

/**
 * Releases a matrix; null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be freed twice.
 */
void rf_matrix_free(struct RfMatrix *m);

/**
 * Row count, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t rf_matrix_rows(const struct RfMatrix *m);

/**
 * Column count, or 0 for null.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
uintptr_t rf_matrix_cols(const struct RfMatrix *m);

/**
 * # Safety
 * `m` must be a live handle and `value` a valid pointer.
 */
enum RfStatus rf_matrix_get(const struct RfMatrix *m, uintptr_t row, uintptr_t col, double *value);

/**
 * Copies all entries row-major into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle and `buf` must hold `len` doubles.
 */
enum RfStatus rf_matrix_copy(const struct RfMatrix *m, double *buf, uintptr_t len);

/**
 * Solves `AᵀX + XA + Q = 0`.
 *
 * # Safety
 * `a`, `q` must be live handles and `out` a valid pointer.
 */
enum RfStatus rf_solve_lyapunov(const struct RfMatrix *a,
                                const struct RfMatrix *q,
                                struct RfMatrix **out);

/**
 * Stabilizing solution of `AᵀP + PA − PBR⁻¹BᵀP + CᵀC = 0`.
 * `relative_residual` may be null.
 *
 * # Safety
 * Matrix arguments must be live handles and `out` a valid pointer.
 */
enum RfStatus rf_solve_care(const struct RfMatrix *a,
                            const struct RfMatrix *b,
                            const struct RfMatrix *c,
                            const struct RfMatrix *r,
                            struct RfMatrix **out,
                            double *relative_residual);

/**
 * Nonnegative root of `−2aσ − gσ² + f = 0` (`a > 0`, `g > 0`, `f ≥ 0`).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RfStatus rf_scalar_sigma(double a, double f, double g, double *out);

/**
 * Runs a convergence study described by a JSON object. Keys follow the
 * library's `StudyConfig` field names; only `case` is required.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RfStatus rf_study_run(const char *json, struct RfStudyResult **out);

/**
 * # Safety
 * `r` must come from [`rf_study_run`] and not be freed twice.
 */
void rf_study_free(struct RfStudyResult *r);

/**
 * Number of `(k, n)` rows, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
uintptr_t rf_study_row_count(const struct RfStudyResult *r);

/**
 * Fitted rate for order `k`. Fails with `InvalidArgument` if `k` was not
 * studied or too few errors cleared the floor.
 *
 * # Safety
 * `r` must be a live handle and `rate` a valid pointer.
 */
enum RfStatus rf_study_rate(const struct RfStudyResult *r, uintptr_t k, double *rate);

/**
 * Writes the study CSV to `path`.
 *
 * # Safety
 * `r` must be a live handle and `path` a NUL-terminated string.
 */
enum RfStatus rf_study_write_csv(const struct RfStudyResult *r, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RICCATI_FEM_H */
