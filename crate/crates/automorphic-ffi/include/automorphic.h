#ifndef AUTOMORPHIC_H
#define AUTOMORPHIC_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AmStatus {
  AM_STATUS_OK = 0,
  AM_STATUS_POLE = 1,
  AM_STATUS_DOMAIN = 2,
  AM_STATUS_CONVERGENCE = 3,
  AM_STATUS_SIEVE_LIMIT = 4,
  AM_STATUS_ITERATION_LIMIT = 5,
  AM_STATUS_INVALID_ARGUMENT = 6,
  AM_STATUS_NULL_POINTER = 7,
  AM_STATUS_PANIC = 8,
} AmStatus;

/**
 * Opaque PSL(2,Z) model with its divisor sieve.
 */
typedef struct AmModel AmModel;

typedef struct AmComplex {
  double re;
  double im;
} AmComplex;

/**
 * Constants of the coefficient-sum asymptotics.
 */
typedef struct AmAsymptotics {
  double main_loglinear;
  double main_linear;
  struct AmComplex c_one;
  struct AmComplex c_osc;
} AmAsymptotics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model whose divisor sieve covers indices up to `sieve_limit`
 * (0 selects the default, or `AUTOMORPHIC_SIEVE_LIMIT` when set).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum AmStatus am_model_new(size_t sieve_limit, struct AmModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must come from [`am_model_new`] and not be used afterwards.
 */
void am_model_free(struct AmModel *model);

/**
 * E(x + iy, s) of weight 2υ.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum AmStatus am_eisenstein(const struct AmModel *model,
                            double x,
                            double y,
                            struct AmComplex s,
                            int32_t upsilon,
                            struct AmComplex *out);

/**
 * Scattering function φ(s).
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum AmStatus am_scattering(const struct AmModel *model, struct AmComplex s, struct AmComplex *out);

/**
 * Renormalized integral of E(r)·conj E(s) with truncation height `b`;
 * `error` (may be null) receives the error estimate.
 *
 * # Safety
 * `model` must be a live handle, `out` writable, `error` null or writable.
 */
enum AmStatus am_rn_product(const struct AmModel *model,
                            struct AmComplex r,
                            struct AmComplex s,
                            double b,
                            struct AmComplex *out,
                            double *error);

/**
 * R.N.∫E(r)E(s)conj E(½+it) by quadrature (`unfolded` = 0) or the unfolded form.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum AmStatus am_triple_product(const struct AmModel *model,
                                struct AmComplex r,
                                struct AmComplex s,
                                double t,
                                bool unfolded,
                                struct AmComplex *out);

/**
 * S(M) = Σ_{0<|m|≤M}|ψ_m(½+it₀)|².
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum AmStatus am_coeff_sum(const struct AmModel *model, double t0, size_t m, double *out);

/**
 * Constants of the coefficient-sum asymptotics at t₀.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum AmStatus am_asymptotic_constants(const struct AmModel *model,
                                      double t0,
                                      struct AmAsymptotics *out);

/**
 * Γ(z).
 *
 * # Safety
 * `out` must be writable.
 */
enum AmStatus am_gamma(struct AmComplex z, struct AmComplex *out);

/**
 * ζ(s) for Re s > −1.
 *
 * # Safety
 * `out` must be writable.
 */
enum AmStatus am_zeta(struct AmComplex s, struct AmComplex *out);

/**
 * K_ν(x).
 *
 * # Safety
 * `out` must be writable.
 */
enum AmStatus am_k_bessel(struct AmComplex nu, double x, struct AmComplex *out);

/**
 * Intertwining coefficient on the 2υ-th K-type.
 *
 * # Safety
 * `out` must be writable.
 */
enum AmStatus am_intertwining(struct AmComplex s, int32_t upsilon, struct AmComplex *out);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`) and returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t am_last_error_message(char *buf, size_t len);

/**
 * Static name of a status code.
 */
const char *am_status_name(enum AmStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AUTOMORPHIC_H */
