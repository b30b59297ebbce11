#ifndef HARMONIC4_H
#define HARMONIC4_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum H4Status {
  H4_STATUS_OK = 0,
  H4_STATUS_NULL_POINTER = 1,
  H4_STATUS_INVALID_ARGUMENT = 2,
  H4_STATUS_NOT_ORTHOGONAL = 3,
  H4_STATUS_BACKEND_MISMATCH = 4,
  H4_STATUS_VERIFICATION_FAILED = 5,
  H4_STATUS_PANIC = 6,
} H4Status;

/**
 * Verification suite selector for `h4_verify`.
 */
typedef enum H4Suite {
  H4_SUITE_IDENTITY = 0,
  H4_SUITE_PARITY = 1,
  H4_SUITE_RESTRICTION = 2,
  H4_SUITE_ISOTROPY = 3,
  H4_SUITE_WITNESSES = 4,
  H4_SUITE_ALL = 5,
} H4Suite;

/**
 * Opaque tensor handle.
 */
typedef struct H4Tensor H4Tensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *h4_last_error(void);

/**
 * Static description of a status code.
 */
const char *h4_status_message(enum H4Status status);

/**
 * Float tensor from `n` (= 9) independent components.
 *
 * # Safety
 * `components` must point to `n` doubles; `out` must be writable.
 */
enum H4Status h4_tensor_new(const double *components, size_t n, struct H4Tensor **out);

/**
 * Exact tensor from `n` (= 9) rational strings such as `"-3/4"`.
 *
 * # Safety
 * `components` must point to `n` NUL-terminated strings; `out` must be writable.
 */
enum H4Status h4_tensor_new_exact(const char *const *components, size_t n, struct H4Tensor **out);

/**
 * Releases a tensor. Null is ignored.
 *
 * # Safety
 * `tensor` must come from this library and not be used afterwards.
 */
void h4_tensor_free(struct H4Tensor *tensor);

/**
 * 1 for exact tensors, 0 for float tensors, -1 for null.
 *
 * # Safety
 * `tensor` must be null or a live handle.
 */
int32_t h4_tensor_is_exact(const struct H4Tensor *tensor);

/**
 * Writes the nine independent components (as doubles) to `out`.
 *
 * # Safety
 * `tensor` must be a live handle; `out` must hold 9 doubles.
 */
enum H4Status h4_tensor_components(const struct H4Tensor *tensor, double *out);

/**
 * Writes the ten invariants to `out`. Exact tensors are evaluated exactly
 * and rounded once.
 *
 * # Safety
 * `tensor` must be a live handle; `out` must hold 10 doubles.
 */
enum H4Status h4_invariants(const struct H4Tensor *tensor, double *out);

/**
 * Invariants as a JSON object (exact tensors give `"p/q"` strings).
 * Free the result with `h4_string_free`.
 *
 * # Safety
 * `tensor` must be a live handle; `out` must be writable.
 */
enum H4Status h4_invariants_json(const struct H4Tensor *tensor, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void h4_string_free(char *s);

/**
 * Applies the row-major orthogonal matrix `q` (9 doubles). Exact tensors
 * are rotated in float mode.
 *
 * # Safety
 * `tensor` must be a live handle; `q` must hold 9 doubles; `out` writable.
 */
enum H4Status h4_rotate(const struct H4Tensor *tensor, const double *q, struct H4Tensor **out);

/**
 * Monte-Carlo isotropy check with the default per-degree tolerances.
 * Writes ten maximum relative deviations to `deviations` and 1/0 to `pass`.
 *
 * # Safety
 * `tensor` must be a live handle; `deviations` must hold 10 doubles; `pass` writable.
 */
enum H4Status h4_isotropy(const struct H4Tensor *tensor,
                          size_t trials,
                          uint64_t seed,
                          double *deviations,
                          int32_t *pass);

/**
 * `J4` from `J2, J3, J6, K6`; 0 when `j2` is 0.
 *
 * # Safety
 * `out` must be writable.
 */
enum H4Status h4_j4_from_mixed(double j2, double j3, double j6, double k6, double *out);

/**
 * Runs a verification suite. Returns `VerificationFailed` if any check
 * fails; `h4_last_error` then names the first failing check.
 */
enum H4Status h4_verify(enum H4Suite suite, uint64_t seed, size_t trials);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC4_H */
