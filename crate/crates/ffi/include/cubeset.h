#ifndef CUBESET_H
#define CUBESET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Coefficient ring.
typedef enum CubesetRing {
  CUBESET_RING_Z = 0,
  CUBESET_RING_Z2 = 1,
} CubesetRing;

// Outcome of a call.
typedef enum CubesetStatus {
  CUBESET_STATUS_OK = 0,
  CUBESET_STATUS_NULL_POINTER = 1,
  CUBESET_STATUS_INVALID_ARGUMENT = 2,
  CUBESET_STATUS_MALFORMED = 3,
  CUBESET_STATUS_INVALID_RACK = 4,
  CUBESET_STATUS_TOO_LARGE = 5,
  CUBESET_STATUS_DEGREE_OVERFLOW = 6,
  CUBESET_STATUS_VALIDATION_FAILED = 7,
  CUBESET_STATUS_OVERFLOW = 8,
  CUBESET_STATUS_PANIC = 9,
} CubesetStatus;

// A Δ-set.
typedef struct CubesetDeltaSet CubesetDeltaSet;

// Homology groups of a complex, one per degree.
typedef struct CubesetHomology CubesetHomology;

// A □-set.
typedef struct CubesetSquareSet CubesetSquareSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last failure message into `buf` (NUL-terminated, truncated to
// `len`) and returns the full message length without the terminator.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t cubeset_last_error(char *buf, size_t len);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or come from this library and not be freed twice.
void cubeset_string_free(char *s);

// The trivial □-set with one cell per dimension up to `max_dim`.
//
// # Safety
// `out` must be a valid pointer.
enum CubesetStatus cubeset_trivial_set(size_t max_dim, struct CubesetSquareSet **out);

// The standard `n`-cube.
//
// # Safety
// `out` must be a valid pointer.
enum CubesetStatus cubeset_cube_set(size_t n, struct CubesetSquareSet **out);

// Parses a □-set from JSON and validates it.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_from_json(const char *json, struct CubesetSquareSet **out);

// The rack space of a rack given as JSON (`{"op": [[...]]}`), truncated at `max_dim`.
//
// # Safety
// `rack_json` must be a NUL-terminated string and `out` a valid pointer.
enum CubesetStatus cubeset_rack_space(const char *rack_json,
                                      size_t max_dim,
                                      uint64_t cap,
                                      struct CubesetSquareSet **out);

// The James complex `J^n` of a □-set.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_james_complex(const struct CubesetSquareSet *set,
                                         size_t n,
                                         struct CubesetSquareSet **out);

// The Δ-subdivision of a □-set.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_subdivide_delta(const struct CubesetSquareSet *set,
                                           uint64_t cap,
                                           struct CubesetDeltaSet **out);

// The □-subdivision of a Δ-set.
//
// # Safety
// `delta` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_subdivide_square(const struct CubesetDeltaSet *delta,
                                            uint64_t cap,
                                            struct CubesetSquareSet **out);

// Truncation dimension of a □-set.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_max_dim(const struct CubesetSquareSet *set, size_t *out);

// Number of `n`-cells; zero above the truncation dimension.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_cell_count(const struct CubesetSquareSet *set,
                                                 size_t n,
                                                 size_t *out);

// The face `∂_i^eps` of the `n`-cell `x`.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_face(const struct CubesetSquareSet *set,
                                           size_t n,
                                           size_t x,
                                           size_t i,
                                           uint8_t eps,
                                           size_t *out);

// Euler characteristic of the truncated set.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_euler(const struct CubesetSquareSet *set, int64_t *out);

// Number of face-relation violations.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_validate(const struct CubesetSquareSet *set, size_t *out);

// JSON text of a □-set; release with [`cubeset_string_free`].
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_square_set_to_json(const struct CubesetSquareSet *set, char **out);

// Releases a □-set.
//
// # Safety
// `set` must be null or a handle not freed before.
void cubeset_square_set_free(struct CubesetSquareSet *set);

// Number of `k`-simplices of a Δ-set.
//
// # Safety
// `delta` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_delta_set_cell_count(const struct CubesetDeltaSet *delta,
                                                size_t k,
                                                size_t *out);

// Releases a Δ-set.
//
// # Safety
// `delta` must be null or a handle not freed before.
void cubeset_delta_set_free(struct CubesetDeltaSet *delta);

// Homology of a □-set in every degree up to its truncation dimension.
//
// # Safety
// `set` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology(const struct CubesetSquareSet *set,
                                    enum CubesetRing coeff,
                                    struct CubesetHomology **out);

// Number of degrees computed.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology_degrees(const struct CubesetHomology *h, size_t *out);

// Free rank in `degree`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology_rank(const struct CubesetHomology *h,
                                         size_t degree,
                                         size_t *out);

// Number of torsion coefficients in `degree`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology_torsion_count(const struct CubesetHomology *h,
                                                  size_t degree,
                                                  size_t *out);

// The `index`-th torsion coefficient in `degree`, as decimal text.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology_torsion(const struct CubesetHomology *h,
                                            size_t degree,
                                            size_t index,
                                            char **out);

// Whether truncation cannot affect `degree`.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CubesetStatus cubeset_homology_trusted(const struct CubesetHomology *h,
                                            size_t degree,
                                            bool *out);

// Releases homology results.
//
// # Safety
// `h` must be null or a handle not freed before.
void cubeset_homology_free(struct CubesetHomology *h);

// The shuffle-sign sum `φ_{m,n}`; fails with `Overflow` beyond 64 bits.
//
// # Safety
// `out` must be a valid pointer.
enum CubesetStatus cubeset_phi(size_t m, size_t n, int64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBESET_H */
