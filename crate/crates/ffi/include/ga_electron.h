#ifndef GA_ELECTRON_H
#define GA_ELECTRON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GaeStatus {
  GAE_STATUS_OK = 0,
  GAE_STATUS_NULL_POINTER = 1,
  GAE_STATUS_INVALID_UTF8 = 2,
  GAE_STATUS_INVALID_ARGUMENT = 3,
  GAE_STATUS_GRADE_MISMATCH = 4,
  GAE_STATUS_PROBLEM_FILE = 5,
  GAE_STATUS_IO = 6,
  GAE_STATUS_NOT_CONVERGED = 7,
  GAE_STATUS_BUFFER_TOO_SMALL = 8,
  GAE_STATUS_NUMERICAL = 9,
  GAE_STATUS_PANIC = 10,
} GaeStatus;

/**
 * Parsed solver problem.
 */
typedef struct GaeProblem GaeProblem;

/**
 * Outcome of a self-consistent solve.
 */
typedef struct GaeScfResult GaeScfResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *gae_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void gae_string_free(char *s);

/**
 * `out = a b`.
 *
 * # Safety
 * Each pointer must address 8 doubles.
 */
enum GaeStatus gae_mv_product(const double *a, const double *b, double *out);

/**
 * `out = a~`.
 *
 * # Safety
 * Each pointer must address 8 doubles.
 */
enum GaeStatus gae_mv_reverse(const double *a, double *out);

/**
 * Grade-`k` part of `a`.
 *
 * # Safety
 * Each pointer must address 8 doubles.
 */
enum GaeStatus gae_mv_grade(const double *a, uint8_t k, double *out);

/**
 * Rotor `exp(-plane theta / 2)` for a unit bivector `plane`.
 *
 * # Safety
 * Each pointer must address 8 doubles.
 */
enum GaeStatus gae_rotor_exp(const double *plane, double theta, double *out);

/**
 * `out = R v R~` for a unit even `rotor` and a vector `v`.
 *
 * # Safety
 * Each pointer must address 8 doubles.
 */
enum GaeStatus gae_rotate_vector(const double *rotor, const double *v, double *out);

/**
 * Parses a problem from TOML text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum GaeStatus gae_problem_from_toml(const char *text, struct GaeProblem **out);

/**
 * Reads and parses a TOML problem file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GaeStatus gae_problem_load(const char *path, struct GaeProblem **out);

/**
 * # Safety
 * `p` must come from `gae_problem_*` and not be freed twice.
 */
void gae_problem_free(struct GaeProblem *p);

/**
 * Grid points in the problem, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t gae_problem_len(const struct GaeProblem *p);

/**
 * Runs the self-consistent solver. An unconverged run still yields a result;
 * check `gae_result_converged`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum GaeStatus gae_problem_solve(const struct GaeProblem *p, struct GaeScfResult **out);

/**
 * # Safety
 * `r` must come from `gae_problem_solve` and not be freed twice.
 */
void gae_result_free(struct GaeScfResult *r);

/**
 * Chemical potential, or NaN for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
double gae_result_mu(const struct GaeScfResult *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
bool gae_result_converged(const struct GaeScfResult *r);

/**
 * # Safety
 * `r` must be null or a live handle.
 */
size_t gae_result_iterations(const struct GaeScfResult *r);

/**
 * Grid points in the result fields, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
size_t gae_result_len(const struct GaeScfResult *r);

/**
 * Copies `rho_half` and `S_half` (`len` each) and `e_S` (`3 len`, xyz per point).
 *
 * # Safety
 * Buffers must hold the stated number of doubles.
 */
enum GaeStatus gae_result_copy_fields(const struct GaeScfResult *r,
                                      double *rho_half,
                                      double *s_half,
                                      double *e_s,
                                      size_t len);

/**
 * Result as JSON; free with `gae_string_free`. Null on failure.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
char *gae_result_to_json(const struct GaeScfResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GA_ELECTRON_H */
