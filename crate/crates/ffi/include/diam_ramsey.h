#ifndef DIAM_RAMSEY_H
#define DIAM_RAMSEY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  DRS_STATUS_OK = 0,
  DRS_STATUS_NULL_POINTER = 1,
  DRS_STATUS_INVALID_UTF8 = 2,
  DRS_STATUS_PARSE = 3,
  DRS_STATUS_INVALID_ARGUMENT = 4,
  DRS_STATUS_NOT_FOUND = 5,
  DRS_STATUS_INCONCLUSIVE = 6,
  DRS_STATUS_BUDGET_EXCEEDED = 7,
  DRS_STATUS_FORMULA_CONTRADICTED = 8,
  DRS_STATUS_INTERNAL = 9,
} DrsStatus;

/**
 * Opaque coloring of `[1, N]`.
 */
typedef struct DrsColoring DrsColoring;

/**
 * Opaque problem spec `(m_1, ..., m_t; r)`, optionally strict.
 */
typedef struct DrsSpec DrsSpec;

/**
 * Opaque solution `B_1 <_p ... <_p B_t`.
 */
typedef struct DrsWitness DrsWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *drs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *drs_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void drs_string_free(char *s);

/**
 * Parses a run-length string such as `0^21^20^3` or `0^{12}`.
 * `num_colors == 0` infers the color count from the largest digit (at least 2).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
DrsStatus drs_coloring_parse(const char *text, uint8_t num_colors, DrsColoring **out);

/**
 * Builds a coloring from `len` colors, each in `[0, num_colors)`.
 *
 * # Safety
 * `colors` must point to `len` readable bytes and `out` must be valid.
 */
DrsStatus drs_coloring_from_colors(const uint8_t *colors,
                                   size_t len,
                                   uint8_t num_colors,
                                   DrsColoring **out);

/**
 * # Safety
 * `c` must be null or a handle from this library not yet freed.
 */
void drs_coloring_free(DrsColoring *c);

/**
 * Length `N` of the coloring, 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t drs_coloring_len(const DrsColoring *c);

/**
 * Color of position `pos` (1-based).
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
DrsStatus drs_coloring_get(const DrsColoring *c, size_t pos, uint8_t *out);

/**
 * Canonical run-length string of the coloring.
 *
 * # Safety
 * `c` must be a live handle and `out` a valid pointer.
 */
DrsStatus drs_coloring_format(const DrsColoring *c, char **out);

/**
 * Creates the spec `(sizes[0], ..., sizes[t-1]; num_colors)`.
 *
 * # Safety
 * `sizes` must point to `t` readable values and `out` must be valid.
 */
DrsStatus drs_spec_new(const size_t *sizes,
                       size_t t,
                       uint8_t num_colors,
                       bool strict,
                       DrsSpec **out);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void drs_spec_free(DrsSpec *s);

/**
 * Writes whether the coloring contains a solution of the spec.
 *
 * # Safety
 * Handles must be live and `out` valid.
 */
DrsStatus drs_has_solution(const DrsColoring *c, const DrsSpec *s, bool *out);

/**
 * Finds the canonical solution. `*out` is set to null when none exists.
 *
 * # Safety
 * Handles must be live and `out` valid. A non-null result must be released
 * with [`drs_witness_free`].
 */
DrsStatus drs_exists_solution(const DrsColoring *c, const DrsSpec *s, DrsWitness **out);

/**
 * # Safety
 * `w` must be null or a handle from this library not yet freed.
 */
void drs_witness_free(DrsWitness *w);

/**
 * Number of sets `t` in the witness, 0 for a null handle.
 *
 * # Safety
 * `w` must be null or a live handle.
 */
size_t drs_witness_set_count(const DrsWitness *w);

/**
 * Copies set `index` (0-based) into `buf`, which holds `cap` entries.
 * `*len` receives the set size; when `cap` is too small nothing is copied
 * and `DRS_STATUS_INVALID_ARGUMENT` is returned.
 *
 * # Safety
 * `w` must be live, `buf` must hold `cap` writable entries, `len` and
 * `color` must be valid pointers.
 */
DrsStatus drs_witness_set(const DrsWitness *w,
                          size_t index,
                          size_t *buf,
                          size_t cap,
                          size_t *len,
                          uint8_t *color);

/**
 * Computes `f` for the spec by exhaustive search.
 *
 * `workers == 0` uses the available parallelism; `node_budget == 0` means
 * unlimited. Returns `DRS_STATUS_INCONCLUSIVE` if the default cap was
 * reached, `DRS_STATUS_BUDGET_EXCEEDED` if the budget ran out, and
 * `DRS_STATUS_FORMULA_CONTRADICTED` if the result disagrees with a known
 * closed form.
 *
 * # Safety
 * `s` must be live and `out` valid.
 */
DrsStatus drs_compute_f(const DrsSpec *s, size_t workers, uint64_t node_budget, size_t *out);

/**
 * Closed form for `f(m, m, m; 2)`, `m >= 2`.
 *
 * # Safety
 * `out` must be valid.
 */
DrsStatus drs_formula_f_mmm2(size_t m, size_t *out);

/**
 * The extremal 2-coloring of length `f(m, m, m; 2) - 1`.
 *
 * # Safety
 * `out` must be valid.
 */
DrsStatus drs_lower_bound_coloring(size_t m, DrsColoring **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAM_RAMSEY_H */
