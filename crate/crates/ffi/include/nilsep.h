#ifndef NILSEP_H
#define NILSEP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum NilsepStatus {
  NILSEP_STATUS_OK = 0,
  NILSEP_STATUS_NULL_POINTER = 1,
  NILSEP_STATUS_INVALID_UTF8 = 2,
  NILSEP_STATUS_PARSE = 3,
  NILSEP_STATUS_NOT_NILPOTENT = 4,
  NILSEP_STATUS_INCOMPATIBLE = 5,
  NILSEP_STATUS_INVALID_WORD = 6,
  NILSEP_STATUS_UNKNOWN_SET = 7,
  NILSEP_STATUS_INVALID_ARGUMENT = 8,
  NILSEP_STATUS_INTERNAL = 9,
} NilsepStatus;

// A named invariant set for a fixed number of matrices.
typedef struct NilsepSet NilsepSet;

// A tuple of nilpotent 2×2 or 3×3 matrices with rational entries.
typedef struct NilsepTuple NilsepTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null if the last
// call succeeded. The pointer stays valid until the next call into this
// library on the same thread; do not free it.
const char *nilsep_last_error_message(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
//
// `s` must be null or a pointer obtained from this library that has not
// been freed yet.
void nilsep_string_free(char *s);

// Parses a JSON tuple document and checks nilpotency.
//
// # Safety
//
// `json` must be a nul-terminated string and `out` a valid pointer.
enum NilsepStatus nilsep_tuple_from_json(const char *json, struct NilsepTuple **out);

// Builds a tuple of `count` integer matrices of side `size`. `entries`
// holds `count * size * size` values, each matrix row-major.
//
// # Safety
//
// `entries` must point to `count * size * size` readable values and `out`
// must be a valid pointer.
enum NilsepStatus nilsep_tuple_from_ints(uintptr_t size,
                                         uintptr_t count,
                                         const int64_t *entries,
                                         struct NilsepTuple **out);

// Side length of the matrices, or 0 for a null handle.
//
// # Safety
//
// `t` must be null or a live tuple handle.
uintptr_t nilsep_tuple_size(const struct NilsepTuple *t);

// Number of matrices, or 0 for a null handle.
//
// # Safety
//
// `t` must be null or a live tuple handle.
uintptr_t nilsep_tuple_count(const struct NilsepTuple *t);

// Canonical JSON document for the tuple. Free with [`nilsep_string_free`].
// Returns null for a null handle.
//
// # Safety
//
// `t` must be null or a live tuple handle.
char *nilsep_tuple_to_json(const struct NilsepTuple *t);

// # Safety
//
// `t` must be null or a tuple handle not yet freed.
void nilsep_tuple_free(struct NilsepTuple *t);

// Looks up a named set (`S2`, `S32`, `S33`, `P33`, `Pprime33`) for
// `count` matrices. Only `S2` accepts any `count >= 2`; the others need
// their fixed count.
//
// # Safety
//
// `name` must be a nul-terminated string and `out` a valid pointer.
enum NilsepStatus nilsep_set_new(const char *name, uintptr_t count, struct NilsepSet **out);

// Number of words in the set, or 0 for a null handle.
//
// # Safety
//
// `s` must be null or a live set handle.
uintptr_t nilsep_set_len(const struct NilsepSet *s);

// Word at `index` as a digit string such as `"1123"`. Free with
// [`nilsep_string_free`]. Null if the handle is null or the index is out
// of range.
//
// # Safety
//
// `s` must be null or a live set handle.
char *nilsep_set_word(const struct NilsepSet *s, uintptr_t index);

// # Safety
//
// `s` must be null or a set handle not yet freed.
void nilsep_set_free(struct NilsepSet *s);

// Evaluates the trace of the word (digits `1`-`9`, e.g. `"1123"`) on the
// tuple. The value comes back as an integer or lowest-terms `p/q`
// string in `*out_value`.
//
// # Safety
//
// `t` must be a live tuple handle, `word` a nul-terminated string and
// `out_value` a valid pointer.
enum NilsepStatus nilsep_eval_word(const struct NilsepTuple *t, const char *word, char **out_value);

// Compares two tuples on every word of the set. On success `*out_word` is
// the first separating word, or null when the tuples agree on the whole
// set.
//
// # Safety
//
// `set`, `a` and `b` must be live handles and `out_word` a valid pointer.
enum NilsepStatus nilsep_separate(const struct NilsepSet *set,
                                  const struct NilsepTuple *a,
                                  const struct NilsepTuple *b,
                                  char **out_word);

// Replays the built-in witness records for the named set. Writes the set
// size and the number of elements with a passing record; the set is
// minimal when the two agree.
//
// # Safety
//
// `name` must be a nul-terminated string; the out-pointers must be valid.
enum NilsepStatus nilsep_verify_minimality(const char *name,
                                           uintptr_t count,
                                           uintptr_t *out_elements,
                                           uintptr_t *out_witnessed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILSEP_H */
