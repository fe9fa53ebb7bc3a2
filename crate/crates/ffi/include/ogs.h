#ifndef OGS_H
#define OGS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OgsStatus {
  OGS_STATUS_OK = 0,
  OGS_STATUS_NULL_POINTER = 1,
  OGS_STATUS_INVALID_ARGUMENT = 2,
  OGS_STATUS_INVALID_SPEC = 3,
  OGS_STATUS_ORACLE_LIMIT = 4,
  OGS_STATUS_INFEASIBLE = 5,
  OGS_STATUS_INTERNAL = 6,
} OgsStatus;

// Scheduling instance handle.
typedef struct OgsInstance OgsInstance;

// Set-cover instance handle.
typedef struct OgsSetCover OgsSetCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next failing call on the same thread.
const char *ogs_last_error_message(void);

// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum OgsStatus ogs_instance_from_json(const char *json, struct OgsInstance **out);

// # Safety
// `inst` must come from [`ogs_instance_from_json`] and not be used afterwards.
void ogs_instance_free(struct OgsInstance *inst);

// # Safety
// `inst` must be a live handle.
uintptr_t ogs_instance_num_jobs(const struct OgsInstance *inst);

// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum OgsStatus ogs_set_cover_from_json(const char *json, struct OgsSetCover **out);

// # Safety
// `sc` must come from [`ogs_set_cover_from_json`] and not be used afterwards.
void ogs_set_cover_free(struct OgsSetCover *sc);

// Evaluates the norm described by `norm_json` at `x[0..len]`.
//
// # Safety
// `norm_json` must be NUL-terminated, `x` must point to `len` doubles and
// `out` must be writable.
enum OgsStatus ogs_norm_eval(const char *norm_json, const double *x, uintptr_t len, double *out);

// Largest number of jobs that fit within the instance budget.
// A `limit` of zero selects the default enumeration limit.
//
// # Safety
// `inst` must be a live handle and `out` writable.
enum OgsStatus ogs_opt_sched_pack(const struct OgsInstance *inst, uint64_t limit, uintptr_t *out);

// Cheapest cost of scheduling every job.
//
// # Safety
// `inst` must be a live handle and `out` writable.
enum OgsStatus ogs_opt_gen_sched(const struct OgsInstance *inst, uint64_t limit, double *out);

// Online run placing every job. Writes the cost and the agents used.
//
// # Safety
// `inst` must be a live handle; `cost` and `tau` must be writable.
enum OgsStatus ogs_run_gen_sched(const struct OgsInstance *inst,
                                 uint64_t seed,
                                 uint64_t limit,
                                 double *cost,
                                 uintptr_t *tau);

// Online set cover. Writes the cover cost and the number of sets bought.
//
// # Safety
// `sc` must be a live handle; `cost` and `sets` must be writable.
enum OgsStatus ogs_run_osc(const struct OgsSetCover *sc,
                           uint64_t seed,
                           uint64_t limit,
                           double *cost,
                           uintptr_t *sets);

// Cheapest cover cost.
//
// # Safety
// `sc` must be a live handle and `out` writable.
enum OgsStatus ogs_opt_osc(const struct OgsSetCover *sc, uint64_t limit, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OGS_H */
