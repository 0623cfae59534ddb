#ifndef GOLDBERG_H
#define GOLDBERG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GoldbergStatus {
  GOLDBERG_STATUS_OK = 0,
  GOLDBERG_STATUS_NULL_POINTER = 1,
  GOLDBERG_STATUS_INVALID_UTF8 = 2,
  GOLDBERG_STATUS_PARSE = 3,
  GOLDBERG_STATUS_DOMAIN = 4,
  GOLDBERG_STATUS_NO_CONVERGENCE = 5,
  GOLDBERG_STATUS_BUDGET = 6,
  // The integer result does not fit the output type.
  GOLDBERG_STATUS_OVERFLOW = 7,
  // The output buffer is too small; the required size was written.
  GOLDBERG_STATUS_BUFFER_TOO_SMALL = 8,
  GOLDBERG_STATUS_PANIC = 9,
} GoldbergStatus;

// A built covering map `h_{m,n}`; safe to share between threads for
// evaluation.
typedef struct GoldbergCovering GoldbergCovering;

// A parsed word together with its cyclic normal form.
typedef struct GoldbergWord GoldbergWord;

typedef struct GoldbergWordStats {
  uint64_t length;
  int64_t n0;
  int64_t n1;
  uint64_t k;
} GoldbergWordStats;

typedef struct GoldbergA0 {
  int64_t t_min;
  double a0;
  uint64_t words_examined;
} GoldbergA0;

typedef struct GoldbergMu {
  double p;
  double r;
  double omega0;
  double omega0_error;
  double a;
  double q;
  double mu;
} GoldbergMu;

typedef struct GoldbergChocolate {
  double s0;
  double tstar_lower;
  double delta_star_upper;
  double hempel_smith_tstar;
} GoldbergChocolate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` as a
// NUL-terminated string. `needed` (optional) receives the size required.
//
// # Safety
// `buf` must be null or valid for `len` bytes; `needed` must be null or valid.
enum GoldbergStatus goldberg_last_error(char *buf, size_t len, size_t *needed);

// Library version as a static NUL-terminated string.
const char *goldberg_version(void);

// Parses a word such as `"A^2 B^-1 A"` into a new handle.
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
// The handle must be released with [`goldberg_word_free`].
enum GoldbergStatus goldberg_word_parse(const char *text, struct GoldbergWord **out);

// Releases a word handle. Null is ignored.
//
// # Safety
// `word` must be null or a handle from [`goldberg_word_parse`] not yet freed.
void goldberg_word_free(struct GoldbergWord *word);

// Trace of the word's matrix. Fails with `Overflow` beyond 64 bits.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum GoldbergStatus goldberg_word_trace(const struct GoldbergWord *word, int64_t *out);

// Length, exponent sums and syllable-pair count of the cyclic word.
//
// # Safety
// `word` must be a live handle and `out` a valid pointer.
enum GoldbergStatus goldberg_word_stats(const struct GoldbergWord *word,
                                        struct GoldbergWordStats *out);

// Canonical cyclic form as text.
//
// # Safety
// `word` must be a live handle, `buf` null or valid for `len` bytes, and
// `needed` null or valid.
enum GoldbergStatus goldberg_word_canonical(const struct GoldbergWord *word,
                                            char *buf,
                                            size_t len,
                                            size_t *needed);

// Exact minimal trace and A0 for the index pair. `force` lifts the search
// size guard.
//
// # Safety
// `out` must be a valid pointer.
enum GoldbergStatus goldberg_a0(int64_t n0, int64_t n1, bool force, struct GoldbergA0 *out);

// Harmonic measure at 0 of the left circle for radius `r`, with the
// alternating-series error bound.
//
// # Safety
// `value` and `error_bound` must be valid pointers.
enum GoldbergStatus goldberg_omega0(double r, double tol, double *value, double *error_bound);

// `mu_{m,n}`. A non-positive `tol` selects the default.
//
// # Safety
// `out` must be a valid pointer.
enum GoldbergStatus goldberg_mu(int64_t m, int64_t n, double tol, struct GoldbergMu *out);

// Chocolate-problem bounds.
//
// # Safety
// `out` must be a valid pointer.
enum GoldbergStatus goldberg_chocolate(double tol, struct GoldbergChocolate *out);

// Builds `h_{m,n}`. A non-positive `tol` selects the default.
//
// # Safety
// `out` must be a valid pointer. The handle must be released with
// [`goldberg_covering_free`].
enum GoldbergStatus goldberg_covering_new(int64_t m,
                                          int64_t n,
                                          double tol,
                                          struct GoldbergCovering **out);

// Releases a covering handle. Null is ignored.
//
// # Safety
// `h` must be null or a handle from [`goldberg_covering_new`] not yet freed.
void goldberg_covering_free(struct GoldbergCovering *h);

// The puncture parameter `mu` of the covering.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum GoldbergStatus goldberg_covering_mu(const struct GoldbergCovering *h, double *out);

// Evaluates `h(re + i im)`. `puncture` (optional) receives 0 off the
// punctures, 1 near `-mu` (value 0) and 2 near `mu` (value 1).
//
// # Safety
// `h` must be a live handle; `out_re`, `out_im` valid pointers; `puncture`
// null or valid.
enum GoldbergStatus goldberg_covering_eval(const struct GoldbergCovering *h,
                                           double re,
                                           double im,
                                           double *out_re,
                                           double *out_im,
                                           int32_t *puncture);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOLDBERG_H */
