#ifndef HOPF_ATLAS_H
#define HOPF_ATLAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum HopfStatus {
  HOPF_STATUS_OK = 0,
  HOPF_STATUS_NULL_POINTER = 1,
  HOPF_STATUS_DOMAIN = 2,
  HOPF_STATUS_POLE = 3,
  HOPF_STATUS_PROXIMITY = 4,
  HOPF_STATUS_PARSE = 5,
  HOPF_STATUS_FIT = 6,
  /**
   * A computed result contradicted a structural guarantee, or a buffer
   * was too small.
   */
  HOPF_STATUS_INTERNAL = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  HOPF_STATUS_PANIC = 8,
} HopfStatus;

/**
 * Gauge used to parametrize a fiber.
 */
typedef enum HopfGauge {
  HOPF_GAUGE_R1 = 0,
  HOPF_GAUGE_R2 = 1,
  /**
   * `R1`, switching to the `k` gauge at `(-1,0,0)`.
   */
  HOPF_GAUGE_AUTO = 2,
} HopfGauge;

/**
 * Opaque handle to a sampled and projected fiber.
 */
typedef struct HopfFiber HopfFiber;

typedef struct HopfQuat {
  double a;
  double b;
  double c;
  double d;
} HopfQuat;

typedef struct HopfVec3 {
  double x;
  double y;
  double z;
} HopfVec3;

/**
 * Summary of a pairwise linking check.
 */
typedef struct HopfLinkResult {
  /**
   * `|gauss_direct|` rounds to 1.
   */
  bool linked;
  /**
   * The crossing test on the transformed pair gives the same verdict.
   */
  bool verdicts_agree;
  /**
   * Gauss linking number of the two projected fibers.
   */
  double gauss_direct;
  /**
   * Base point of the transformed second fiber.
   */
  struct HopfVec3 transformed_base;
  /**
   * The transformed second fiber is the x-axis (antipodal base points).
   */
  bool axis_line;
} HopfLinkResult;

/**
 * Message of the last failed call on this thread, or NULL after a
 * successful call. The pointer stays valid until the next call into the
 * library on this thread.
 */
const char *hopf_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hopf_version(void);

/**
 * Writes the quaternion product `p·q` to `out`.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `HopfQuat`.
 */
enum HopfStatus hopf_quat_mul(struct HopfQuat p, struct HopfQuat q, struct HopfQuat *out);

/**
 * Rotates `p` by the nonzero quaternion `r` (`r p r⁻¹`).
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `HopfVec3`.
 */
enum HopfStatus hopf_rotate(struct HopfQuat r, struct HopfVec3 p, struct HopfVec3 *out);

/**
 * Hopf map of a unit quaternion (renormalized within tolerance).
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `HopfVec3`.
 */
enum HopfStatus hopf_map(struct HopfQuat q, struct HopfVec3 *out);

/**
 * Samples the fiber over `base`, projects it and fits its shape. On
 * success `*out` receives a handle to release with [`hopf_fiber_free`].
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one pointer.
 */
enum HopfStatus hopf_fiber_new(struct HopfVec3 base,
                               size_t samples,
                               enum HopfGauge gauge,
                               struct HopfFiber **out);

/**
 * Releases a fiber handle. NULL is ignored.
 *
 * # Safety
 * `fiber` must be NULL or a handle from [`hopf_fiber_new`] not yet freed.
 */
void hopf_fiber_free(struct HopfFiber *fiber);

/**
 * Number of samples in the fiber, or 0 for NULL.
 *
 * # Safety
 * `fiber` must be NULL or a live handle.
 */
size_t hopf_fiber_len(const struct HopfFiber *fiber);

/**
 * Copies the S³ samples as `len` consecutive `(a, b, c, d)` quadruples.
 * `capacity` is the number of doubles available at `buf`.
 *
 * # Safety
 * `fiber` must be NULL or a live handle; `buf` must be NULL or valid for
 * `capacity` writes.
 */
enum HopfStatus hopf_fiber_points_s3(const struct HopfFiber *fiber, double *buf, size_t capacity);

/**
 * Copies the projected samples as `len` consecutive `(x, y, z)` triples.
 * A sample at the projection pole is written as three NaNs.
 *
 * # Safety
 * `fiber` must be NULL or a live handle; `buf` must be NULL or valid for
 * `capacity` writes.
 */
enum HopfStatus hopf_fiber_projected(const struct HopfFiber *fiber, double *buf, size_t capacity);

/**
 * The fiber document as JSON, identical to the command-line output.
 * Returns NULL for a NULL handle; free the result with
 * [`hopf_string_free`].
 *
 * # Safety
 * `fiber` must be NULL or a live handle.
 */
char *hopf_fiber_to_json(const struct HopfFiber *fiber);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void hopf_string_free(char *s);

/**
 * Checks that the projected fibers over `a` and `b` are linked.
 *
 * # Safety
 * `out` must be NULL or point to writable memory for one `HopfLinkResult`.
 */
enum HopfStatus hopf_link_check(struct HopfVec3 a,
                                struct HopfVec3 b,
                                size_t samples,
                                struct HopfLinkResult *out);

#endif  /* HOPF_ATLAS_H */
