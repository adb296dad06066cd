#ifndef OARRAY_H
#define OARRAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OaStatus {
  OA_STATUS_OK = 0,
  OA_STATUS_NULL_POINTER = 1,
  OA_STATUS_INVALID_UTF8 = 2,
  OA_STATUS_PARSE = 3,
  OA_STATUS_DOMAIN = 4,
  OA_STATUS_INFEASIBLE = 5,
  OA_STATUS_UNREACHABLE = 6,
  OA_STATUS_NOT_APPLICABLE = 7,
  OA_STATUS_VERIFICATION = 8,
  OA_STATUS_TOO_LARGE = 9,
  OA_STATUS_OVERFLOW = 10,
  OA_STATUS_IO = 11,
  OA_STATUS_PANIC = 12,
} OaStatus;

/**
 * Opaque orthogonal array.
 */
typedef struct OaArray OaArray;

/**
 * Opaque set of starting rows.
 */
typedef struct OaStartingRows OaStartingRows;

/**
 * Outcome of a strength-2 check.
 */
typedef struct OaReport {
  bool is_oa;
  uint64_t lambda;
  uint64_t rows;
  /**
   * Multiplicity of the most repeated row.
   */
  uint64_t m;
  bool optimal;
  bool basic;
  bool m_optimal;
  /**
   * Offending column pair and symbols when `is_oa` is false.
   */
  size_t witness_columns[2];
  uint8_t witness_symbols[2];
  uint64_t witness_count;
} OaReport;

/**
 * Bounds on the repeated-row multiplicity. Rationals are numerator/denominator pairs.
 */
typedef struct OaBounds {
  int64_t rao_numer;
  int64_t rao_denom;
  uint64_t floor_bound;
  /**
   * 0 when no refined bound applies.
   */
  uint64_t best_alpha;
  int64_t best_numer;
  int64_t best_denom;
} OaBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *oa_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void oa_string_free(char *s);

/**
 * # Safety
 * `a` must come from this library and not have been freed.
 */
void oa_array_free(struct OaArray *a);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void oa_starting_rows_free(struct OaStartingRows *s);

/**
 * Parses the `OA k n lambda` text format.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string; `result` a valid out pointer.
 */
enum OaStatus oa_array_parse(const char *text_ptr, struct OaArray **result);

/**
 * # Safety
 * `path` must be a nul-terminated string; `result` a valid out pointer.
 */
enum OaStatus oa_array_read_file(const char *path, struct OaArray **result);

/**
 * Builds an array from `len` row-major symbols.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `result` a valid out pointer.
 */
enum OaStatus oa_array_from_rows(size_t k,
                                 size_t n,
                                 uint64_t lambda,
                                 const uint8_t *data,
                                 size_t len,
                                 struct OaArray **result);

/**
 * Canonical text of the array; release with [`oa_string_free`].
 *
 * # Safety
 * `a` must be a live handle; `result` a valid out pointer.
 */
enum OaStatus oa_array_to_string(const struct OaArray *a, char **result);

/**
 * # Safety
 * `a` must be a live handle; each out pointer must be valid or null.
 */
enum OaStatus oa_array_dims(const struct OaArray *a,
                            size_t *k,
                            size_t *n,
                            uint64_t *lambda,
                            size_t *rows);

/**
 * Pointer to the row-major symbols, valid while `a` lives.
 *
 * # Safety
 * `a` must be a live handle; `len` a valid out pointer or null.
 */
const uint8_t *oa_array_data(const struct OaArray *a, size_t *len);

/**
 * # Safety
 * `a` must be a live handle; `report` a valid out pointer.
 */
enum OaStatus oa_verify(const struct OaArray *a, struct OaReport *report);

/**
 * Parses the `START k n m [rotation]` format.
 *
 * # Safety
 * `text_ptr` must be a nul-terminated string; `result` a valid out pointer.
 */
enum OaStatus oa_starting_rows_parse(const char *text_ptr, struct OaStartingRows **result);

/**
 * # Safety
 * `s` must be a live handle; `result` a valid out pointer.
 */
enum OaStatus oa_develop(const struct OaStartingRows *s, struct OaArray **result);

/**
 * Basic `OA_{2t+1}(4t+1, 2)` from a Hadamard matrix of order `8t+4`.
 *
 * # Safety
 * `result` must be a valid out pointer.
 */
enum OaStatus oa_hadamard_basic(size_t t, size_t block_index, struct OaArray **result);

/**
 * Optimal array of all tuples with `(k−1)/n` zeros.
 *
 * # Safety
 * `result` must be a valid out pointer.
 */
enum OaStatus oa_enumerate(size_t k, size_t n, struct OaArray **result);

/**
 * Number of parts for the given column classes (`class_sizes` null for the
 * default split, `len` 0 with a non-null pointer for the single-class split).
 *
 * # Safety
 * `class_sizes` must point to `len` values or be null; `parts` a valid out pointer.
 */
enum OaStatus oa_partition_count(size_t k,
                                 size_t n,
                                 const size_t *class_sizes,
                                 size_t len,
                                 size_t *parts);

/**
 * Part `index` of the partition by per-class sums.
 *
 * # Safety
 * As [`oa_partition_count`]; `result` must be a valid out pointer.
 */
enum OaStatus oa_partition_part(size_t k,
                                size_t n,
                                const size_t *class_sizes,
                                size_t len,
                                size_t index,
                                struct OaArray **result);

/**
 * Deletes `s` columns: `columns` (length `s`) if non-null, else the last `s`.
 *
 * # Safety
 * `a` must be a live handle; `columns` null or pointing to `s` values;
 * `result` a valid out pointer.
 */
enum OaStatus oa_delete_columns(const struct OaArray *a,
                                size_t s,
                                const size_t *columns,
                                struct OaArray **result);

/**
 * # Safety
 * `result` must be a valid out pointer.
 */
enum OaStatus oa_bounds(uint64_t k, uint64_t n, uint64_t lambda, struct OaBounds *result);

/**
 * # Safety
 * `result` must be a valid out pointer.
 */
enum OaStatus oa_max_safe_deletions(uint64_t k, uint64_t n, uint64_t lambda, uint64_t *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OARRAY_H */
