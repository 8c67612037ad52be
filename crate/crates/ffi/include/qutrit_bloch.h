/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef QUTRIT_BLOCH_H
#define QUTRIT_BLOCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of residuals written by `qb_state_check`.
 */
#define QB_CHECK_ENTRIES 13

typedef enum QbStatus {
  QB_STATUS_OK = 0,
  QB_STATUS_NULL_POINTER = 1,
  QB_STATUS_INVALID_ARGUMENT = 2,
  QB_STATUS_NOT_HERMITIAN = 3,
  QB_STATUS_BAD_TRACE = 4,
  QB_STATUS_INVALID_STATE = 5,
  QB_STATUS_DOMAIN = 6,
  QB_STATUS_PANIC = 7,
} QbStatus;

/**
 * Opaque qutrit state.
 */
typedef struct QbState QbState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a state from `ω`, `α`, `β` (three doubles each). The coefficients
 * must be finite with `Σω = 1`; positivity is not required (see
 * `qb_state_is_valid`).
 *
 * # Safety
 * Array arguments must point to three doubles; `out` must be writable.
 */
enum QbStatus qb_state_from_coefficients(const double *omega,
                                         const double *alpha,
                                         const double *beta,
                                         struct QbState **out);

/**
 * Creates a state from a Hermitian, trace-1 matrix given as 18 doubles.
 *
 * # Safety
 * `rho` must point to 18 doubles; `out` must be writable.
 */
enum QbStatus qb_state_from_rho(const double *rho, struct QbState **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void qb_state_free(struct QbState *s);

/**
 * # Safety
 * `s` must be a live handle; each output must point to three doubles.
 */
enum QbStatus qb_state_coefficients(const struct QbState *s,
                                    double *omega,
                                    double *alpha,
                                    double *beta);

/**
 * Writes the density matrix as 18 doubles.
 *
 * # Safety
 * `s` must be a live handle; `out` must point to 18 doubles.
 */
enum QbStatus qb_state_rho(const struct QbState *s, double *out);

/**
 * Bloch vectors `u_ij = (α, β, γ)` (9 doubles, pair-major) and radii (3).
 *
 * # Safety
 * `s` must be a live handle; `u` must point to 9 doubles, `radii` to 3.
 */
enum QbStatus qb_state_bloch(const struct QbState *s, double *u, double *radii);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum QbStatus qb_state_purity(const struct QbState *s, double *out);

/**
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum QbStatus qb_state_is_valid(const struct QbState *s, double tol, bool *out);

/**
 * Writes `QB_CHECK_ENTRIES` residuals (each passes when `≥ -tol`) in the
 * order given by `qb_constraint_name`, plus the overall verdict.
 *
 * # Safety
 * `s` must be a live handle; `residuals` must point to `QB_CHECK_ENTRIES`
 * doubles; `overall` must be writable.
 */
enum QbStatus qb_state_check(const struct QbState *s, double tol, double *residuals, bool *overall);

/**
 * Static name of check entry `index`, or null when out of range.
 */
const char *qb_constraint_name(size_t index);

/**
 * Evolves under `exp(iθG)` with `generator` one of `A12`, `B13`, `C23`, ….
 * The input state must be valid.
 *
 * # Safety
 * `s` must be a live handle, `generator` a NUL-terminated string and `out`
 * writable.
 */
enum QbStatus qb_state_evolve(const struct QbState *s,
                              const char *generator,
                              double theta,
                              struct QbState **out);

/**
 * Draws a valid state; the same seed always gives the same state.
 *
 * # Safety
 * `out` must be writable.
 */
enum QbStatus qb_sample(uint64_t seed, struct QbState **out);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *qb_last_error(void);

/**
 * Library version, NUL-terminated and static.
 */
const char *qb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUTRIT_BLOCH_H */
