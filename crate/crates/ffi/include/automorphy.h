#ifndef AUTOMORPHY_H
#define AUTOMORPHY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum AmStatus {
  AM_STATUS_OK = 0,
  AM_STATUS_NULL_POINTER = 1,
  AM_STATUS_INVALID_UTF8 = 2,
  AM_STATUS_PARSE = 3,
  AM_STATUS_INVALID_MODULUS = 4,
  AM_STATUS_DOMAIN = 5,
  AM_STATUS_TORUS_MISMATCH = 6,
  AM_STATUS_NOT_INVERTIBLE = 7,
  AM_STATUS_NUMERIC = 8,
  AM_STATUS_SHAPE = 9,
  AM_STATUS_BUFFER_TOO_SMALL = 10,
  AM_STATUS_PANIC = 11,
} AmStatus;

// Opaque handle to a factor of automorphy together with its torus.
typedef struct AmFactor AmFactor;

// Outcome of a numeric theta-function check.
typedef struct AmThetaReport {
  double max_residual;
  size_t samples;
  bool pass;
} AmThetaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null.
// The pointer stays valid until the next failing call on the same thread.
const char *am_last_error(void);

// Library version as a static NUL-terminated string.
const char *am_version(void);

// # Safety
// `s` must be null or a string returned by this library.
void am_string_free(char *s);

// # Safety
// `f` must be null or a handle returned by this library.
void am_factor_free(struct AmFactor *f);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_factor_clone(const struct AmFactor *f, struct AmFactor **out);

// Parses a bundle document: a torus plus either `A`, `matrix` or `descriptor`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum AmStatus am_factor_from_json(const char *json, struct AmFactor **out);

// # Safety
// `f` must be a live handle and `out` a valid pointer. Free the result with `am_string_free`.
enum AmStatus am_factor_to_json(const struct AmFactor *f, char **out);

// Indecomposable bundle of rank `r`, degree `d` and parameter `a`.
//
// # Safety
// `out` must be a valid pointer.
enum AmStatus am_normal_form(double tau_re,
                             double tau_im,
                             size_t r,
                             int64_t d,
                             double a_re,
                             double a_im,
                             struct AmFactor **out);

// Same bundle built as a pushforward from the cover.
//
// # Safety
// `out` must be a valid pointer.
enum AmStatus am_atiyah_construct(double tau_re,
                                  double tau_im,
                                  size_t r,
                                  int64_t d,
                                  double a_re,
                                  double a_im,
                                  struct AmFactor **out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_factor_rank(const struct AmFactor *f, size_t *out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_factor_degree(const struct AmFactor *f, int64_t *out);

// Evaluates `A(u)` and writes `n*n` complex entries, row-major, as interleaved
// real and imaginary parts. `len` is the capacity of `buf` in doubles.
//
// # Safety
// `f` must be a live handle and `buf` must hold `len` doubles.
enum AmStatus am_factor_eval(const struct AmFactor *f,
                             double u_re,
                             double u_im,
                             double *buf,
                             size_t len);

// # Safety
// `f` and `g` must be live handles and `out` a valid pointer.
enum AmStatus am_tensor(const struct AmFactor *f, const struct AmFactor *g, struct AmFactor **out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_sym_power(const struct AmFactor *f, size_t n, struct AmFactor **out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_wedge_power(const struct AmFactor *f, size_t k, struct AmFactor **out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_dual(const struct AmFactor *f, struct AmFactor **out);

// Pullback to the `r`-fold cover.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_pullback(const struct AmFactor *f, uint32_t r, struct AmFactor **out);

// Pushforward from the `r`-fold cover; the torus of `f` is taken as the cover.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_pushforward(const struct AmFactor *f, uint32_t r, struct AmFactor **out);

// `A(m, u)` as a factor on the same torus.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum AmStatus am_iterate(const struct AmFactor *f, int64_t m, struct AmFactor **out);

// Writes 1 if `A(u) B(u) = B(qu) A'(u)` holds for the witness matrix `b`, else 0.
// The witness is passed as a factor whose generator is `B`.
//
// # Safety
// All handles must be live and `out` a valid pointer.
enum AmStatus am_check_witness(const struct AmFactor *f,
                               const struct AmFactor *g,
                               const struct AmFactor *b,
                               int *out);

// Recognizes an indecomposable degree-zero factor. On success writes 1 and the
// descriptor fields; writes 0 when the factor is not of that form.
//
// # Safety
// `f` must be a live handle and the output pointers valid.
enum AmStatus am_recognize_deg0(const struct AmFactor *f,
                                int *found,
                                size_t *rank,
                                double *a_re,
                                double *a_im);

// Checks the quasi-periodicity of the theta function with characteristic `(a, b)`.
//
// # Safety
// `out` must be a valid pointer.
enum AmStatus am_theta_check(double tau_re,
                             double tau_im,
                             double a,
                             double b,
                             uint32_t terms,
                             size_t samples,
                             uint64_t seed,
                             struct AmThetaReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AUTOMORPHY_H */
