#ifndef QUANTUM_AFFINE_H
#define QUANTUM_AFFINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Opaque handle to an alternating bicharacter.
typedef struct QaBicharacter QaBicharacter;

typedef int32_t QaStatus;

#define QA_OK 0

#define QA_NULL_POINTER 1

#define QA_INVALID_INPUT 2

#define QA_DIMENSION_MISMATCH 3

#define QA_BUFFER_TOO_SMALL 4

#define QA_VERIFICATION_FAILED 5

#define QA_INTERNAL 6

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last error on this thread, or NULL. The pointer stays
// valid until the next library call on the same thread.
const char *qa_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *qa_version(void);

// Builds a bicharacter from `m` exponent matrices of size `n×n`, given as
// `m·n·n` integers in row-major order, matrix after matrix.
//
// # Safety
// `entries` must point to `m·n·n` readable integers (or be NULL when that
// product is zero); `out` must be a valid pointer.
QaStatus qa_bicharacter_new(size_t n, size_t m, const int64_t *entries, struct QaBicharacter **out);

// Builds a bicharacter from the JSON input format used by the `qaffine` tool.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
QaStatus qa_bicharacter_from_json(const char *json, struct QaBicharacter **out);

// Releases a handle; NULL is ignored.
//
// # Safety
// `b` must come from this library and must not be used afterwards.
void qa_bicharacter_free(struct QaBicharacter *b);

// Number of generators `n` and parameters `m`.
//
// # Safety
// All pointers must be valid.
QaStatus qa_bicharacter_dims(const struct QaBicharacter *b, size_t *n, size_t *m);

// Rank of the radical lattice `S_w` for the subset encoded by `w_mask`.
//
// # Safety
// `b` and `out` must be valid.
QaStatus qa_radical_rank(const struct QaBicharacter *b, uint64_t w_mask, size_t *out);

// Writes the ranks of all `2^n` strata, ordered by size of `w` and then
// lexicographically, together with the matching masks when `masks` is not
// NULL. `written` receives the required length; if `len` is too small
// nothing else is written and `QA_BUFFER_TOO_SMALL` is returned.
//
// # Safety
// `ranks` (and `masks` if given) must have room for `len` elements.
QaStatus qa_stratum_ranks(const struct QaBicharacter *b,
                          size_t *ranks,
                          uint64_t *masks,
                          size_t len,
                          size_t *written);

// Poisson matrix `U[i][j] = Σ_k 2 L_k[i][j] μ_k` for rational `μ_k =
// mu_num[k] / mu_den[k]`, written as `n·n` numerator/denominator pairs in
// lowest terms (denominators positive).
//
// # Safety
// `mu_num`, `mu_den` must hold `m` integers; `out_num`, `out_den` must have
// room for `n·n` integers.
QaStatus qa_poisson_matrix(const struct QaBicharacter *b,
                           const int64_t *mu_num,
                           const int64_t *mu_den,
                           int64_t *out_num,
                           int64_t *out_den,
                           size_t len);

// Checks the semiclassical limit formula on `(x^s, x^t)` with quadratic
// interpolation and symbolic `μ`. Returns `QA_OK` when it holds and
// `QA_VERIFICATION_FAILED` otherwise.
//
// # Safety
// `s` and `t` must hold `len` integers.
QaStatus qa_verify_limit(const struct QaBicharacter *b,
                         const int64_t *s,
                         const int64_t *t,
                         size_t len);

// Graphviz text of the stratum diagram. `torus_invariant` selects the
// order on the ideals `⟨x_i : i ∈ w⟩` instead of the primitive strata.
//
// # Safety
// `out` must be valid; release the result with `qa_string_free`.
QaStatus qa_hasse_dot(const struct QaBicharacter *b, bool torus_invariant, char **out);

// The `analyze` report of the `qaffine` tool for a JSON input.
//
// # Safety
// `json` must be NUL-terminated and `out` valid; release the result with
// `qa_string_free`.
QaStatus qa_analyze_json(const char *json, char **out);

// Releases a string returned by this library; NULL is ignored.
//
// # Safety
// `s` must come from this library and must not be used afterwards.
void qa_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUANTUM_AFFINE_H */
