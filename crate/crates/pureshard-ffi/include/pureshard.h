#ifndef PURESHARD_H
#define PURESHARD_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PsStatus {
  PsStatus_Ok = 0,
  PsStatus_NullPointer = 1,
  PsStatus_InvalidArgument = 2,
  PsStatus_Parse = 3,
  PsStatus_Unsupported = 4,
  PsStatus_ResourceLimit = 5,
  PsStatus_Internal = 6,
  PsStatus_BufferTooSmall = 7,
  PsStatus_Panic = 8,
} PsStatus;

/**
 * An arrangement together with its poset of regions, shards and Salvetti complex.
 */
typedef struct PsArrangement PsArrangement;

/**
 * A finite Coxeter group with its reflection arrangement.
 */
typedef struct PsCoxeter PsCoxeter;

/**
 * Summary of the interval `[1, Δ²]` of an arrangement.
 */
typedef struct PsMonoid PsMonoid;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ps_version(void);

/**
 * Message of the last failure on this thread. Valid until the next failing call on the thread.
 */
const char *ps_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void ps_string_free(char *s);

/**
 * Build a built-in arrangement from a tag such as `I2:4`, `A3`, `B3` or `D4`.
 *
 * # Safety
 * `tag` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PsStatus ps_arrangement_builtin(const char *tag, struct PsArrangement **out);

/**
 * Build an arrangement from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PsStatus ps_arrangement_from_json(const char *json, struct PsArrangement **out);

/**
 * # Safety
 * `h` must be null or a handle from `ps_arrangement_*` that has not been freed.
 */
void ps_arrangement_free(struct PsArrangement *h);

/**
 * Number of hyperplanes, regions and shards.
 *
 * # Safety
 * `h` must be a live handle; each out-pointer must be null or writable.
 */
enum PsStatus ps_arrangement_counts(const struct PsArrangement *h,
                                    uintptr_t *hyperplanes,
                                    uintptr_t *regions,
                                    uintptr_t *shards);

/**
 * Shard id of each cover edge. `out` receives `edges` entries when `cap` is large enough;
 * `len` always receives the number of cover edges.
 *
 * # Safety
 * `h` must be a live handle, `out` must have room for `cap` entries, `len` must be writable.
 */
enum PsStatus ps_arrangement_edge_shards(const struct PsArrangement *h,
                                         uintptr_t *out,
                                         uintptr_t cap,
                                         uintptr_t *len);

/**
 * Decide whether two words over shard loops (arrays of shard ids) are equal in the fundamental group.
 *
 * # Safety
 * `h` must be a live handle, `a`/`b` must point to `a_len`/`b_len` entries, `equal` must be writable.
 */
enum PsStatus ps_loops_equal(const struct PsArrangement *h,
                             const uintptr_t *a,
                             uintptr_t a_len,
                             const uintptr_t *b,
                             uintptr_t b_len,
                             bool *equal);

/**
 * Enumerate `[1, Δ²]` with a state budget (0 for the default).
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum PsStatus ps_monoid_new(const struct PsArrangement *h, uintptr_t budget, struct PsMonoid **out);

/**
 * # Safety
 * `m` must be null or a handle from `ps_monoid_new` that has not been freed.
 */
void ps_monoid_free(struct PsMonoid *m);

/**
 * Element count, number of maximal chains (saturating at `u64::MAX`) and the lattice property.
 *
 * # Safety
 * `m` must be a live handle; each out-pointer must be null or writable.
 */
enum PsStatus ps_monoid_summary(const struct PsMonoid *m,
                                uintptr_t *elements,
                                uint64_t *chains,
                                bool *lattice);

/**
 * Rank generating function of the interval.
 *
 * # Safety
 * `m` must be a live handle, `out` must have room for `cap` entries, `len` must be writable.
 */
enum PsStatus ps_monoid_rank_generating_function(const struct PsMonoid *m,
                                                 uintptr_t *out,
                                                 uintptr_t cap,
                                                 uintptr_t *len);

/**
 * Interval element and rank of `Crackle(region)` (or `Pow(region)` when `pow` is true).
 *
 * # Safety
 * `m` must be a live handle; `element` and `rank` must be null or writable.
 */
enum PsStatus ps_monoid_image(const struct PsMonoid *m,
                              uintptr_t region,
                              bool pow,
                              uintptr_t *element,
                              uintptr_t *rank);

/**
 * Build a finite Coxeter group from a tag such as `I2:4`, `A3`, `B3`.
 *
 * # Safety
 * `tag` must be a NUL-terminated string and `out` writable.
 */
enum PsStatus ps_coxeter_new(const char *tag, struct PsCoxeter **out);

/**
 * # Safety
 * `h` must be null or a handle from `ps_coxeter_new` that has not been freed.
 */
void ps_coxeter_free(struct PsCoxeter *h);

/**
 * Group order, rank and length of the longest element.
 *
 * # Safety
 * `h` must be a live handle; each out-pointer must be null or writable.
 */
enum PsStatus ps_coxeter_info(const struct PsCoxeter *h,
                              uintptr_t *order,
                              uintptr_t *rank,
                              uintptr_t *longest);

/**
 * A word for `Snap(w)`, where `w` is given by a word over 0-based generator indices.
 *
 * # Safety
 * `h` must be a live handle, `word` must point to `word_len` entries, `out` must have room for
 * `cap` entries and `len` must be writable.
 */
enum PsStatus ps_coxeter_snap(const struct PsCoxeter *h,
                              const uintptr_t *word,
                              uintptr_t word_len,
                              uintptr_t *out,
                              uintptr_t cap,
                              uintptr_t *len);

/**
 * Run a verification suite on its default targets. `report` receives a JSON report to be
 * released with `ps_string_free`; `passed` receives the verdict.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `report` and `passed` must be null or writable.
 */
enum PsStatus ps_verify(const char *suite, char **report, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PURESHARD_H */
