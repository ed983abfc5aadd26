#ifndef NAMBU_H
#define NAMBU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. `NAMBU_STATUS_OK` and
 * `NAMBU_STATUS_VIOLATIONS` both produce a report.
 */
typedef enum NambuStatus {
  NAMBU_STATUS_OK = 0,
  /**
   * The computation finished and found a failed check.
   */
  NAMBU_STATUS_VIOLATIONS = 1,
  NAMBU_STATUS_NULL_ARGUMENT = 2,
  NAMBU_STATUS_INVALID_UTF8 = 3,
  NAMBU_STATUS_PARSE = 4,
  NAMBU_STATUS_UNKNOWN_NAME = 5,
  /**
   * A value outside the domain: zero `q`, a singular coefficient, an
   * unbound symbol.
   */
  NAMBU_STATUS_INVALID_VALUE = 6,
  NAMBU_STATUS_PRECONDITION = 7,
  /**
   * A Rust panic was caught at the boundary. Handles passed to the call
   * stay valid.
   */
  NAMBU_STATUS_INTERNAL = 8,
} NambuStatus;

/**
 * A ternary algebra together with its `q` choice.
 */
typedef struct NambuAlgebra NambuAlgebra;

/**
 * A finished report. The strings live as long as the handle.
 */
typedef struct NambuReport NambuReport;

typedef struct NambuTwist NambuTwist;

/**
 * Inclusive degree window `lo..=hi`.
 */
typedef struct NambuWindow {
  int64_t lo;
  int64_t hi;
} NambuWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a
 * successful one. Valid until the next call on the same thread.
 */
const char *nambu_last_error(void);

/**
 * Static, NUL-terminated crate version.
 */
const char *nambu_version(void);

/**
 * Builds `cfz`, `qvw` or `witt`. NULL `z` or `q` leaves the parameter
 * free; otherwise they are numbers such as `"2i"` or `"1/3"`.
 *
 * # Safety
 * String arguments must be NULL or NUL-terminated; `out` must be writable.
 */
enum NambuStatus nambu_algebra_new(const char *name,
                                   const char *z,
                                   const char *q,
                                   struct NambuAlgebra **out);

/**
 * # Safety
 * `algebra` must be NULL or a handle from [`nambu_algebra_new`] not yet freed.
 */
void nambu_algebra_free(struct NambuAlgebra *algebra);

/**
 * Builds an `identity`, `scaling` or `beta` twist for `algebra`. `p1` and
 * `p2` are the two twist parameters; NULL leaves one free.
 *
 * # Safety
 * `algebra` must be a live handle; strings as for [`nambu_algebra_new`].
 */
enum NambuStatus nambu_twist_new(const struct NambuAlgebra *algebra,
                                 const char *kind,
                                 const char *p1,
                                 const char *p2,
                                 struct NambuTwist **out);

/**
 * # Safety
 * `twist` must be NULL or a handle from [`nambu_twist_new`] not yet freed.
 */
void nambu_twist_free(struct NambuTwist *twist);

/**
 * Checks the fundamental identity, or its twisted form when `twist` is
 * non-NULL. A NULL `window` checks with symbolic degrees.
 *
 * # Safety
 * Handles must be live or NULL where allowed; `out` must be writable.
 */
enum NambuStatus nambu_verify(const struct NambuAlgebra *algebra,
                              const struct NambuTwist *twist,
                              const struct NambuWindow *window,
                              struct NambuReport **out);

/**
 * Classifies the 2×2 twist ansatz on `algebra`.
 *
 * # Safety
 * As for [`nambu_verify`].
 */
enum NambuStatus nambu_classify(const struct NambuAlgebra *algebra,
                                const struct NambuWindow *window,
                                struct NambuReport **out);

/**
 * Solves for endomorphisms of `algebra`.
 *
 * # Safety
 * As for [`nambu_verify`].
 */
enum NambuStatus nambu_solve_endo(const struct NambuAlgebra *algebra,
                                  const struct NambuWindow *window,
                                  struct NambuReport **out);

/**
 * Untwists `algebra` by `twist`. A twist that cannot be undone yields
 * `NAMBU_STATUS_VIOLATIONS` and a report with the reason.
 *
 * # Safety
 * As for [`nambu_verify`]; `twist` is required.
 */
enum NambuStatus nambu_untwist(const struct NambuAlgebra *algebra,
                               const struct NambuTwist *twist,
                               struct NambuReport **out);

/**
 * Checks the differential-operator realization at rational `lambda`, with
 * numeric recovery on `window` to tolerance `tol`.
 *
 * # Safety
 * `lambda` must be NUL-terminated; `out` must be writable.
 */
enum NambuStatus nambu_realize(const char *lambda,
                               struct NambuWindow window,
                               double tol,
                               bool scan,
                               struct NambuReport **out);

/**
 * Samples the polynomial Jacobian bracket under the named substitution.
 *
 * # Safety
 * `gamma` must be NUL-terminated; `out` must be writable.
 */
enum NambuStatus nambu_jacobian_demo(const char *gamma,
                                     size_t samples,
                                     uint32_t degree,
                                     int64_t bound,
                                     uint64_t seed,
                                     struct NambuReport **out);

/**
 * The report as compact JSON, owned by `report`.
 *
 * # Safety
 * `report` must be a live handle.
 */
const char *nambu_report_json(const struct NambuReport *report);

/**
 * The human-readable rendering, owned by `report`.
 *
 * # Safety
 * `report` must be a live handle.
 */
const char *nambu_report_text(const struct NambuReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL (which reads as not clean).
 */
bool nambu_report_clean(const struct NambuReport *report);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void nambu_report_free(struct NambuReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NAMBU_H */
