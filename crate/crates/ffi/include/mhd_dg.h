#ifndef MHD_DG_H
#define MHD_DG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Snapshot file formats.
 */
typedef enum MhdFormat {
  MHD_FORMAT_CSV = 0,
  MHD_FORMAT_VTK = 1,
} MhdFormat;

/**
 * Result codes of the C API.
 */
typedef enum MhdStatus {
  MHD_STATUS_OK = 0,
  MHD_STATUS_NULL_POINTER = 1,
  MHD_STATUS_INVALID_ARGUMENT = 2,
  MHD_STATUS_UNKNOWN_CASE = 3,
  MHD_STATUS_NON_POSITIVE_DENSITY = 4,
  MHD_STATUS_NEGATIVE_PRESSURE = 5,
  MHD_STATUS_NON_FINITE_RESIDUAL = 6,
  MHD_STATUS_INADMISSIBLE_STATE = 7,
  MHD_STATUS_IO = 8,
  MHD_STATUS_PANIC = 9,
} MhdStatus;

/**
 * Opaque solver handle.
 */
typedef struct MhdSolver MhdSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a solver for `case` on an `nx × ny` mesh with degree `k`.
 *
 * # Safety
 * `case_name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum MhdStatus mhd_solver_create(const char *case_name,
                                 uintptr_t nx,
                                 uintptr_t ny,
                                 uintptr_t k,
                                 double cfl,
                                 bool oe,
                                 bool ldf,
                                 struct MhdSolver **out);

/**
 * Releases a solver. Null is ignored.
 *
 * # Safety
 * `solver` must come from [`mhd_solver_create`] and not be used afterwards.
 */
void mhd_solver_free(struct MhdSolver *solver);

/**
 * Advances the solution to time `t`, landing on it exactly.
 *
 * # Safety
 * `solver` must be a live handle.
 */
enum MhdStatus mhd_solver_advance_to(struct MhdSolver *solver, double t);

/**
 * Current time and number of steps taken so far.
 *
 * # Safety
 * `solver` must be a live handle; `t` and `steps` may be null.
 */
enum MhdStatus mhd_solver_time(const struct MhdSolver *solver, double *t, uintptr_t *steps);

/**
 * Writes the 8 domain integrals `[ρ, ρu_x, ρu_y, ρu_z, E, B_x, B_y, B_z]`.
 *
 * # Safety
 * `solver` must be a live handle and `totals` point to 8 doubles.
 */
enum MhdStatus mhd_solver_conservation(const struct MhdSolver *solver, double *totals);

/**
 * Maximum and area-weighted L² norm of `∇·B` inside cells, plus `max |B|`.
 *
 * # Safety
 * `solver` must be a live handle; output pointers may be null.
 */
enum MhdStatus mhd_solver_divergence(const struct MhdSolver *solver,
                                     double *max,
                                     double *l2,
                                     double *max_field);

/**
 * Cell average of the 8 conserved variables in cell `(i, j)`.
 *
 * # Safety
 * `solver` must be a live handle and `out` point to 8 doubles.
 */
enum MhdStatus mhd_solver_cell_average(const struct MhdSolver *solver,
                                       uintptr_t i,
                                       uintptr_t j,
                                       double *out);

/**
 * Writes a cell-centre snapshot of the current state to `path`.
 *
 * # Safety
 * `solver` must be a live handle and `path` a NUL-terminated string.
 */
enum MhdStatus mhd_solver_write_snapshot(const struct MhdSolver *solver,
                                         const char *path,
                                         enum MhdFormat format);

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *mhd_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MHD_DG_H */
