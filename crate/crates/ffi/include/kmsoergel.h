#ifndef KMSOERGEL_H
#define KMSOERGEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KmsStatus {
  KMS_STATUS_OK = 0,
  KMS_STATUS_NULL_POINTER = 1,
  KMS_STATUS_INVALID_UTF8 = 2,
  KMS_STATUS_PARSE = 3,
  KMS_STATUS_VALIDATION = 4,
  KMS_STATUS_COMPUTE = 5,
  KMS_STATUS_PANIC = 6,
} KmsStatus;

// A validated root datum together with its named automorphisms.
typedef struct KmsDatum KmsDatum;

// A Laurent polynomial over the lattice of the datum it was created with.
typedef struct KmsPoly KmsPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Free with
// `kms_string_free`.
char *kms_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void kms_string_free(char *s);

// Parses and validates a root-datum JSON document.
//
// # Safety
// `json` must be a nul-terminated string and `out` writable.
enum KmsStatus kms_datum_from_json(const char *json, struct KmsDatum **out);

// Built-in datum by name (`A2`, `B2`, `G2`, `A1xA1`, `affineA1`, ...).
//
// # Safety
// `name` must be a nul-terminated string and `out` writable.
enum KmsStatus kms_datum_standard(const char *name, struct KmsDatum **out);

// # Safety
// `d` must be NULL or a handle from this library, not used afterwards.
void kms_datum_free(struct KmsDatum *d);

// Lattice rank and number of simple roots.
//
// # Safety
// `d` must be a live handle; outputs must be writable.
enum KmsStatus kms_datum_shape(const struct KmsDatum *d, uintptr_t *rank, uintptr_t *num_simple);

// Order of W_J, or `KMS_STATUS_COMPUTE` when W_J is infinite.
//
// # Safety
// `d` must be a live handle, `parabolic` must hold `len` indices.
enum KmsStatus kms_weyl_order(const struct KmsDatum *d,
                              const uintptr_t *parabolic,
                              uintptr_t len,
                              uintptr_t *out);

// Parses a polynomial in the `c*x^[a1,...,ar] + ...` text form.
//
// # Safety
// `d` must be a live handle, `text` nul-terminated, `out` writable.
enum KmsStatus kms_poly_parse(const struct KmsDatum *d, const char *text, struct KmsPoly **out);

// # Safety
// `p` must be NULL or a handle from this library, not used afterwards.
void kms_poly_free(struct KmsPoly *p);

// # Safety
// `p` must be a live handle and `out` writable.
enum KmsStatus kms_poly_to_string(const struct KmsPoly *p, char **out);

// Value at the identity (the dimension, for characters), as a decimal string.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum KmsStatus kms_poly_evaluate_at_one(const struct KmsPoly *p, char **out);

// Applies the Demazure operator of a word (0-based indices, applied right
// to left as a composition).
//
// # Safety
// Handles must be live, `word` must hold `len` indices, `out` writable.
enum KmsStatus kms_demazure(const struct KmsDatum *d,
                            const uintptr_t *word,
                            uintptr_t len,
                            const struct KmsPoly *p,
                            struct KmsPoly **out);

// Character of the irreducible W_J-representation of highest weight `weight`.
//
// # Safety
// `d` must be a live handle, `weight` must hold `rank` entries and
// `parabolic` `plen` indices; `out` writable.
enum KmsStatus kms_weyl_character(const struct KmsDatum *d,
                                  const int64_t *weight,
                                  uintptr_t rank,
                                  const uintptr_t *parabolic,
                                  uintptr_t plen,
                                  struct KmsPoly **out);

// Minimal representatives of W_J \ W / W_K as a JSON array of reduced words.
//
// # Safety
// `d` must be a live handle, index arrays must hold the given lengths,
// `out` writable.
enum KmsStatus kms_double_cosets(const struct KmsDatum *d,
                                 const uintptr_t *left,
                                 uintptr_t llen,
                                 const uintptr_t *right,
                                 uintptr_t rlen,
                                 uintptr_t max_len,
                                 char **out);

// Runs a command-line invocation (`argv[0]` is the program name) and
// returns its stdout text and exit code.
//
// # Safety
// `argv` must hold `argc` nul-terminated strings; outputs writable.
enum KmsStatus kms_cli_run(int argc, const char *const *argv, char **out, int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KMSOERGEL_H */
