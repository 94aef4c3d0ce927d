#ifndef WEINORMAN_H
#define WEINORMAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WnStatus {
  WN_STATUS_OK = 0,
  WN_STATUS_NULL_POINTER = 1,
  WN_STATUS_INVALID_ARGUMENT = 2,
  WN_STATUS_INVALID_TYPE = 3,
  // No cominuscule node; plan in contact mode instead.
  WN_STATUS_EXCLUDED_TYPE = 4,
  WN_STATUS_INVALID_INPUT = 5,
  WN_STATUS_NUMERICAL = 6,
  WN_STATUS_INTERNAL = 7,
  WN_STATUS_PANIC = 8,
} WnStatus;

typedef enum WnMode {
  WN_MODE_COMINUSCULE = 0,
  WN_MODE_CONTACT = 1,
} WnMode;

typedef struct WnAlgebra WnAlgebra;

typedef struct WnHierarchy WnHierarchy;

typedef struct WnTrajectory WnTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. Valid until the next
// failing call; never null.
const char *wn_last_error(void);

// Build the algebra of a type such as `"A2"`, `"B3xA1"` or `"A1+T2"`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a writable pointer.
enum WnStatus wn_algebra_new(const char *spec, struct WnAlgebra **out);

// # Safety
// `alg` must come from [`wn_algebra_new`] and not be used afterwards.
void wn_algebra_free(struct WnAlgebra *alg);

// Dimension of the algebra, 0 for a null handle.
//
// # Safety
// `alg` must be null or a live handle.
size_t wn_algebra_dim(const struct WnAlgebra *alg);

// Plan the factorization of `alg`.
//
// # Safety
// `alg` must be a live handle and `out` a writable pointer.
enum WnStatus wn_hierarchy_new(const struct WnAlgebra *alg,
                               enum WnMode mode,
                               struct WnHierarchy **out);

// # Safety
// `h` must come from [`wn_hierarchy_new`] and not be used afterwards.
void wn_hierarchy_free(struct WnHierarchy *h);

// Number of factors `r`, 0 for a null handle.
//
// # Safety
// `h` must be null or a live handle.
size_t wn_hierarchy_factor_count(const struct WnHierarchy *h);

// Symbolic right-hand sides as a JSON string; release it with
// [`wn_string_free`].
//
// # Safety
// `h` must be a live handle and `out` a writable pointer.
enum WnStatus wn_hierarchy_emit_json(const struct WnHierarchy *h, char **out);

// # Safety
// `s` must come from this library and not be used afterwards.
void wn_string_free(char *s);

// Integrate a seeded random sinusoidal input on `[0, horizon]`.
//
// A breakdown is not an error: check [`wn_trajectory_status`].
//
// # Safety
// `h` must be a live handle and `out` a writable pointer.
enum WnStatus wn_solve_random(const struct WnHierarchy *h,
                              uint64_t seed,
                              double step,
                              double horizon,
                              struct WnTrajectory **out);

// Integrate a constant input given by `len` coefficients in basis order.
//
// # Safety
// `coeffs` must point to `len` doubles; `h` and `out` as for
// [`wn_solve_random`].
enum WnStatus wn_solve_constant(const struct WnHierarchy *h,
                                const double *coeffs,
                                size_t len,
                                double step,
                                double horizon,
                                struct WnTrajectory **out);

// Integrate an input described by JSON keyed by basis labels, the same
// format the command line accepts.
//
// # Safety
// `json` must be a NUL-terminated string; `h` and `out` as for
// [`wn_solve_random`].
enum WnStatus wn_solve_json(const struct WnHierarchy *h,
                            const char *json,
                            double step,
                            double horizon,
                            struct WnTrajectory **out);

// # Safety
// `tr` must come from a `wn_solve_*` call and not be used afterwards.
void wn_trajectory_free(struct WnTrajectory *tr);

// 0 if the run completed, 1 on breakdown (filling `time` and `stage` when
// non-null), -1 for a null handle.
//
// # Safety
// `tr` must be null or a live handle; `time` and `stage` null or writable.
int32_t wn_trajectory_status(const struct WnTrajectory *tr, double *time, size_t *stage);

// Number of stored grid points.
//
// # Safety
// `tr` must be null or a live handle.
size_t wn_trajectory_len(const struct WnTrajectory *tr);

// Copy factor `f` (0-based) at grid point `n` into `buf` as a full
// coefficient vector in basis order; `buf` must hold the algebra dimension.
//
// # Safety
// `tr` must be a live handle and `buf` writable for `len` doubles.
enum WnStatus wn_trajectory_xi(const struct WnTrajectory *tr,
                               size_t n,
                               size_t f,
                               double *buf,
                               size_t len);

// Compare the reconstructed product against a direct integration of the
// adjoint equation and store the largest max-norm error in `sup_error`.
//
// # Safety
// `tr` must be a live handle and `sup_error` writable.
enum WnStatus wn_trajectory_verify(const struct WnTrajectory *tr, double *sup_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEINORMAN_H */
