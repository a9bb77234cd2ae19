#ifndef DEPHASING_H
#define DEPHASING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DephasingBasis {
  DEPHASING_BASIS_SITE = 0,
  DEPHASING_BASIS_EIGEN = 1,
} DephasingBasis;

typedef enum DephasingModel {
  DEPHASING_MODEL_GLOBAL = 0,
  DEPHASING_MODEL_LOCAL = 1,
  DEPHASING_MODEL_CLASSICAL = 2,
} DephasingModel;

typedef enum DephasingStatus {
  DEPHASING_STATUS_OK = 0,
  DEPHASING_STATUS_NULL_POINTER = 1,
  DEPHASING_STATUS_INVALID_PARAMS = 2,
  DEPHASING_STATUS_INVALID_BATH = 3,
  DEPHASING_STATUS_DIVERGENT_DEPHASING = 4,
  DEPHASING_STATUS_INVALID_STATE = 5,
  DEPHASING_STATUS_BASIS_MISMATCH = 6,
  DEPHASING_STATUS_NEGATIVE_TIME = 7,
  DEPHASING_STATUS_DEGENERATE_STEADY_STATE = 8,
  DEPHASING_STATUS_NO_NULL_VECTOR = 9,
  DEPHASING_STATUS_PANIC = 10,
  DEPHASING_STATUS_OTHER = 11,
} DephasingStatus;

/**
 * Opaque handle.
 */
typedef struct DephasingSystem DephasingSystem;

typedef struct DephasingEigensystem {
  double omega;
  double eps_plus;
  double eps_minus;
  double alpha_plus;
  double alpha_minus;
  double beta_plus;
  double beta_minus;
} DephasingEigensystem;

/**
 * Row-major 2x2 complex matrix: entries `[00, 01, 10, 11]`.
 */
typedef struct DephasingDensity {
  double re[4];
  double im[4];
  enum DephasingBasis basis;
} DephasingDensity;

typedef struct DephasingCurrents {
  double j1;
  double j2;
  double dh_dt;
  /**
   * Current from the model's closed form.
   */
  double j1_closed_form;
} DephasingCurrents;

/**
 * Creates a system; temperatures are `k_B T`, the spectral density is `kappa nu^exponent`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum DephasingStatus dephasing_system_new(double h,
                                          double delta,
                                          double kappa,
                                          double exponent,
                                          double t1,
                                          double t2,
                                          enum DephasingModel model,
                                          struct DephasingSystem **out);

/**
 * # Safety
 * `system` must come from [`dephasing_system_new`] and not be freed twice. Null is ignored.
 */
void dephasing_system_free(struct DephasingSystem *system);

/**
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum DephasingStatus dephasing_system_eigensystem(const struct DephasingSystem *system,
                                                  struct DephasingEigensystem *out);

/**
 * Steady state written in the requested basis.
 *
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum DephasingStatus dephasing_system_steady_state(const struct DephasingSystem *system,
                                                   enum DephasingBasis basis,
                                                   struct DephasingDensity *out);

/**
 * Heat currents at the steady state.
 *
 * # Safety
 * `system` must be a live handle and `out` writable.
 */
enum DephasingStatus dephasing_system_currents(const struct DephasingSystem *system,
                                               struct DephasingCurrents *out);

/**
 * Propagates `rho0` for time `t`; the result is in the same basis as `rho0`.
 *
 * # Safety
 * `system` must be a live handle, `rho0` readable and `out` writable.
 */
enum DephasingStatus dephasing_system_propagate(const struct DephasingSystem *system,
                                                const struct DephasingDensity *rho0,
                                                double t,
                                                struct DephasingDensity *out);

/**
 * Message for the last failure on this thread; empty if none. Valid until the next call.
 */
const char *dephasing_last_error(void);

/**
 * NUL-terminated crate version.
 */
const char *dephasing_version(void);

#endif  /* DEPHASING_H */
