#ifndef SPHEREMAP_H
#define SPHEREMAP_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of every fallible call.
 */
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_INVALID_UTF8 = 2,
  SM_STATUS_PARSE = 3,
  SM_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The claimed fold list fails; the output holds the witness.
   */
  SM_STATUS_NOT_A_FOLD = 5,
  /**
   * The map is not ∞-fold; the output holds its fold profile.
   */
  SM_STATUS_NOT_INFTY_FOLD = 6,
  SM_STATUS_SLACK_TOO_LARGE = 7,
  SM_STATUS_INTERNAL = 8,
  SM_STATUS_PANIC = 9,
} SmStatus;

/**
 * Opaque map handle.
 */
typedef struct SmMap SmMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *sm_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *sm_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sm_string_free(char *s);

/**
 * # Safety
 * `map` must come from this library and not have been freed.
 */
void sm_map_free(struct SmMap *map);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum SmStatus sm_map_from_json(const char *json, struct SmMap **out);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SmStatus sm_map_to_json(const struct SmMap *map, char **out);

/**
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SmStatus sm_map_source_dim(const struct SmMap *map, size_t *out);

/**
 * Map with squared norm scale_sq·‖z‖^{2d}.
 *
 * # Safety
 * `scale_sq` must be a nul-terminated rational string; `out` must be writable.
 */
enum SmStatus sm_homogeneous_map(size_t n, uint32_t d, const char *scale_sq, struct SmMap **out);

/**
 * Degree-m polynomial map with exactly the given folds. `radii_sq` is
 * comma-separated; `out_trace` may be null.
 *
 * # Safety
 * String arguments must be nul-terminated; non-null outputs must be writable.
 */
enum SmStatus sm_poly_k_fold(size_t n,
                             size_t k,
                             size_t m,
                             const char *radii_sq,
                             struct SmMap **out,
                             char **out_trace);

/**
 * Rational map with q = 1 + a·z and exactly the given folds. `a` lists
 * n entries "re" or "re:im"; `out_trace` may be null.
 *
 * # Safety
 * String arguments must be nul-terminated; non-null outputs must be writable.
 */
enum SmStatus sm_rational_k_fold(size_t n,
                                 size_t k,
                                 size_t m,
                                 const char *radii_sq,
                                 const char *a,
                                 struct SmMap **out,
                                 char **out_trace);

/**
 * Fold profile as JSON.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SmStatus sm_fold_profile(const struct SmMap *map, char **out);

/**
 * Newton expansion over folds "t1:T1,t2:T2". On `SM_STATUS_NOT_A_FOLD`
 * the output holds the failing step and its witness.
 *
 * # Safety
 * `map` must be a live handle, `folds` nul-terminated, `out` writable.
 */
enum SmStatus sm_newton_expand(const struct SmMap *map, const char *folds, char **out);

/**
 * Normal form as JSON. On `SM_STATUS_NOT_INFTY_FOLD` the output holds the
 * fold profile.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SmStatus sm_decompose(const struct SmMap *map, char **out);

/**
 * Exact certificate that ‖z‖² = t implies ‖f(z)‖² = T, as JSON.
 *
 * # Safety
 * `map` must be a live handle, `t` and `big_t` nul-terminated, `out` writable.
 */
enum SmStatus sm_check_sphere(const struct SmMap *map,
                              const char *t,
                              const char *big_t,
                              char **out);

/**
 * Seeded sampling of ‖f(z)‖ > 1 for 1 < ‖z‖ < 3, as JSON.
 *
 * # Safety
 * `map` must be a live handle; `out` must be writable.
 */
enum SmStatus sm_check_outside(const struct SmMap *map, size_t samples, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEREMAP_H */
