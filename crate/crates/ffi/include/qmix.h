/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef QMIX_H
#define QMIX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes returned by every fallible function.
 */
typedef enum QmixStatus {
  QMIX_STATUS_OK = 0,
  QMIX_STATUS_NULL_POINTER = 1,
  QMIX_STATUS_INVALID_UTF8 = 2,
  QMIX_STATUS_INVALID_SPEC = 3,
  QMIX_STATUS_OUT_OF_RANGE = 4,
  QMIX_STATUS_PRECONDITION = 5,
  QMIX_STATUS_CERTIFICATION = 6,
  QMIX_STATUS_BUFFER_TOO_SMALL = 7,
  QMIX_STATUS_INTERNAL = 8,
} QmixStatus;

/**
 * A certified character table of a group.
 */
typedef struct QmixCharTable QmixCharTable;

/**
 * A finite group with its multiplication law.
 */
typedef struct QmixGroup QmixGroup;

/**
 * The mixing defect of a triple of functions and the bound it is compared
 * against.
 */
typedef struct QmixMixingReport {
  double theta;
  double raw_re;
  double raw_im;
  double product_re;
  double product_im;
  double bound;
  size_t quasirandom_degree;
  double margin;
  /**
   * Nonzero when the bound is at least 1 or the group is not quasirandom.
   */
  uint8_t vacuous;
  /**
   * Nonzero when some input has sup norm above 1.
   */
  uint8_t sup_norm_exceeded;
} QmixMixingReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qmix_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qmix_version(void);

/**
 * Build the group named by `spec`, e.g. `"psl2:7"` or `"prod:cyclic:2+alt:5"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QmixStatus qmix_group_new(const char *spec, struct QmixGroup **out);

/**
 * Release a group. Null is ignored.
 *
 * # Safety
 * `group` must come from [`qmix_group_new`] and not be used afterwards.
 */
void qmix_group_free(struct QmixGroup *group);

/**
 * Order of the group, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t qmix_group_order(const struct QmixGroup *group);

/**
 * `*out = a * b` in the canonical element indexing.
 *
 * # Safety
 * `group` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_group_mul(const struct QmixGroup *group, size_t a, size_t b, size_t *out);

/**
 * `*out = a^-1`.
 *
 * # Safety
 * `group` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_group_inv(const struct QmixGroup *group, size_t a, size_t *out);

/**
 * Compute and certify the character table of `group`. `seed` fixes the
 * random combination of class sums used by the eigensolver.
 *
 * # Safety
 * `group` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_chartab_new(const struct QmixGroup *group,
                                 uint64_t seed,
                                 struct QmixCharTable **out);

/**
 * Release a character table. Null is ignored.
 *
 * # Safety
 * `table` must come from [`qmix_chartab_new`] and not be used afterwards.
 */
void qmix_chartab_free(struct QmixCharTable *table);

/**
 * Number of conjugacy classes (and irreducibles), or 0 for null.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t qmix_chartab_num_classes(const struct QmixCharTable *table);

/**
 * Copy the irreducible degrees into `buf`. `*written` receives the number
 * of degrees, including when `len` is too small.
 *
 * # Safety
 * `buf` must hold `len` elements and `written` must be valid.
 */
enum QmixStatus qmix_chartab_degrees(const struct QmixCharTable *table,
                                     size_t *buf,
                                     size_t len,
                                     size_t *written);

/**
 * Smallest nontrivial irreducible degree, or 0 for null.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t qmix_chartab_quasirandom_degree(const struct QmixCharTable *table);

/**
 * `*out = sum of d^-s over the nontrivial irreducibles`.
 *
 * # Safety
 * `table` must be a live handle and `out` a valid pointer.
 */
enum QmixStatus qmix_chartab_zeta(const struct QmixCharTable *table, double s, double *out);

/**
 * Mixing defect `|E f1(x) f2(xy) f3(xy^2) - E f1 E f2 E f3|` of three
 * complex functions, each given as `2 * n` interleaved doubles.
 *
 * # Safety
 * Handles must be live, each `f` must hold `2 * n` doubles where `n` is
 * the group order, and `out` must be valid.
 */
enum QmixStatus qmix_theta_defect(const struct QmixGroup *group,
                                  const struct QmixCharTable *table,
                                  const double *f1,
                                  const double *f2,
                                  const double *f3,
                                  struct QmixMixingReport *out);

/**
 * `*out = #{(x, y) : x in A1, xy in A2, xy^2 in A3}`.
 *
 * # Safety
 * Each set pointer must hold its stated number of indices (it may be null
 * when the length is 0); `out` must be valid.
 */
enum QmixStatus qmix_count_progressions(const struct QmixGroup *group,
                                        const size_t *a1,
                                        size_t len1,
                                        const size_t *a2,
                                        size_t len2,
                                        const size_t *a3,
                                        size_t len3,
                                        uint64_t *out);

/**
 * `*out = (2 / sqrt(d))^(1/4)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QmixStatus qmix_theorem_bound(size_t d, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMIX_H */
