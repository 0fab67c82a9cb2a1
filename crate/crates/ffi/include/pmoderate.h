#ifndef PMODERATE_H
#define PMODERATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PmStatus {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_POINTER = 1,
  PM_STATUS_INVALID_UTF8 = 2,
  PM_STATUS_INVALID_SPEC = 3,
  PM_STATUS_RESOURCE_LIMIT = 4,
  PM_STATUS_PRIME_DOES_NOT_DIVIDE = 5,
  PM_STATUS_ELEMENTARY_ABELIAN = 6,
  PM_STATUS_UNDECIDED = 7,
  PM_STATUS_PRECONDITION = 8,
  PM_STATUS_OVERFLOW = 9,
  PM_STATUS_PANIC = 10,
  PM_STATUS_OTHER = 11,
} PmStatus;

typedef enum PmStrategy {
  PM_STRATEGY_EXHAUSTIVE = 0,
  PM_STRATEGY_CONSTRUCTIVE = 1,
} PmStrategy;

typedef enum PmVerdict {
  PM_VERDICT_MODERATE = 0,
  PM_VERDICT_EXTREME = 1,
} PmVerdict;

/*
 Opaque handle to a permutation group.
 */
typedef struct PmGroup PmGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *pm_version(void);

/*
 Message describing the last failure on this thread, or an empty string.
 Valid until the next call into this library on the same thread.
 */
const char *pm_last_error_message(void);

/*
 Builds a group from a JSON group specification.

 # Safety
 `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_group_from_json(const char *json, struct PmGroup **out);

/*
 Builds a built-in group by name, e.g. `"Product(D6,D6)"`.

 # Safety
 `name` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_group_from_name(const char *name, struct PmGroup **out);

/*
 Releases a group handle. Null is ignored.

 # Safety
 `group` must come from this library and not be used afterwards.
 */
void pm_group_free(struct PmGroup *group);

/*
 # Safety
 `group` and `out` must be valid pointers.
 */
enum PmStatus pm_group_degree(const struct PmGroup *group, uintptr_t *out);

/*
 Group order; `Overflow` when it does not fit in 64 bits.

 # Safety
 `group` and `out` must be valid pointers.
 */
enum PmStatus pm_group_order(const struct PmGroup *group, uint64_t *out);

/*
 Whether every subset is stabilized by some Sylow `p`-subgroup.

 # Safety
 `group` and `out` must be valid pointers.
 */
enum PmStatus pm_is_concealed(const struct PmGroup *group, uint64_t p, bool *out);

/*
 Classifies the group at `p`; writes the verdict and the full report as JSON.

 # Safety
 `group`, `verdict` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
 */
enum PmStatus pm_classify(const struct PmGroup *group,
                          uint64_t p,
                          enum PmStrategy strategy,
                          uint64_t seed,
                          enum PmVerdict *verdict,
                          char **out_json);

/*
 Histogram of stabilizer `p`-parts over all subsets, as JSON.

 # Safety
 `group` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
 */
enum PmStatus pm_census(const struct PmGroup *group, uint64_t p, char **out_json);

/*
 The counting certificate with its cover bound and, when conclusive, a random witness.

 # Safety
 `group` and `out_json` must be valid pointers. Free the string with `pm_string_free`.
 */
enum PmStatus pm_prop31(const struct PmGroup *group,
                        uint64_t p,
                        uint64_t trials,
                        uint64_t seed,
                        char **out_json);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `text` must come from this library and not be used afterwards.
 */
void pm_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMODERATE_H */
