#ifndef AFFINE_TOEPLITZ_H
#define AFFINE_TOEPLITZ_H

/* Generated by cbindgen from affine-toeplitz-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  /**
   * Success.
   */
  AT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  AT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  AT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed input: unknown names, bad JSON, zero legs, wrong weights.
   */
  AT_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Mathematically out of range: β below the convergence threshold,
   * legs outside the prime set, measures without the required structure.
   */
  AT_STATUS_DOMAIN_ERROR = 4,
  /**
   * A result did not fit the fixed-width C types.
   */
  AT_STATUS_OVERFLOW = 5,
  /**
   * An internal invariant failed; the library state is still sound.
   */
  AT_STATUS_INTERNAL = 6,
} AtStatus;

/**
 * A probability measure on the unit circle (opaque).
 */
typedef struct AtMeasure AtMeasure;

/**
 * A state oracle on spanning monomials (opaque).
 */
typedef struct AtState AtState;

/**
 * One state evaluation: value and truncation error bound (0 when exact).
 */
typedef struct {
  double re;
  double im;
  double error_bound;
} AtValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; never freed by the caller.
 */
const char *at_version(void);

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; never freed by
 * the caller.
 */
const char *at_last_error_message(void);

/**
 * Frees a string returned by a label function.
 *
 * # Safety
 * `text` must be null or a pointer previously returned by this library's
 * label functions, not freed before.
 */
void at_string_free(char *text);

/**
 * Builds a built-in measure: "lebesgue", "delta1", or "delta-1".
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
AtStatus at_measure_named(const char *name, AtMeasure **out);

/**
 * Parses a measure from its JSON wire form, e.g.
 * `{"kind":"atoms","atoms":[{"turns":{"num":0,"den":1},"weight":{"num":1,"den":1}}]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
AtStatus at_measure_from_json(const char *json, AtMeasure **out);

/**
 * Human-readable label of the measure; free with [`at_string_free`].
 * Returns null if `measure` is null.
 *
 * # Safety
 * `measure` must be null or a live measure handle.
 */
char *at_measure_label(const AtMeasure *measure);

/**
 * # Safety
 * `measure` must be null or a live measure handle; it is consumed.
 */
void at_measure_free(AtMeasure *measure);

/**
 * The KMS_β equilibrium state ψ_{β,μ} on the full algebra; needs β > 1.
 *
 * # Safety
 * `mu` must be a live measure handle; `out` must be a valid pointer.
 */
AtStatus at_state_kms(double beta, const AtMeasure *mu, AtState **out);

/**
 * The KMS_β state restricted to legs that factor over the given primes;
 * defined for every β > 0.
 *
 * # Safety
 * `primes` must point to `primes_len` readable u64 values; `mu` must be a
 * live measure handle; `out` must be a valid pointer.
 */
AtStatus at_state_kms_finite(double beta,
                             const uint64_t *primes,
                             size_t primes_len,
                             const AtMeasure *mu,
                             AtState **out);

/**
 * The ground state pulled back from the measure's Toeplitz state.
 *
 * # Safety
 * `mu` must be a live measure handle; `out` must be a valid pointer.
 */
AtStatus at_state_ground(const AtMeasure *mu, AtState **out);

/**
 * Independent numerical oracle: ψ_{β,μ} evaluated in the truncated
 * Hilbert-space model at the given depth. Needs β > 1 and a purely
 * atomic measure.
 *
 * # Safety
 * `mu` must be a live measure handle; `out` must be a valid pointer.
 */
AtStatus at_state_spatial(double beta, const AtMeasure *mu, uint64_t depth, AtState **out);

/**
 * Human-readable label of the state; free with [`at_string_free`].
 * Returns null if `state` is null.
 *
 * # Safety
 * `state` must be null or a live state handle.
 */
char *at_state_label(const AtState *state);

/**
 * Evaluates the state on the monomial V_a S^m S^{*n} V_b^*.
 *
 * # Safety
 * `state` must be a live state handle; `out` must be a valid pointer.
 */
AtStatus at_state_evaluate(const AtState *state,
                           uint64_t a,
                           uint64_t m,
                           uint64_t n,
                           uint64_t b,
                           AtValue *out);

/**
 * # Safety
 * `state` must be null or a live state handle; it is consumed.
 */
void at_state_free(AtState *state);

/**
 * Normal-form product of two spanning monomials, each given as the
 * quadruple [a, m, n, b] of V_a S^m S^{*n} V_b^*.
 *
 * # Safety
 * `x` and `y` must each point to 4 readable u64 values; `out` must point
 * to 4 writable u64 values.
 */
AtStatus at_monomial_product(const uint64_t *x, const uint64_t *y, uint64_t *out);

/**
 * Adjoint of a spanning monomial as a quadruple [a, m, n, b].
 *
 * # Safety
 * `x` must point to 4 readable u64 values; `out` must point to 4 writable
 * u64 values.
 */
AtStatus at_monomial_adjoint(const uint64_t *x, uint64_t *out);

/**
 * Least upper bound (a, m) ∨ (b, n) in the cone ℕ^× ⋉ ℕ.
 *
 * # Safety
 * `out_a` and `out_m` must be valid pointers.
 */
AtStatus at_cone_join(uint64_t a,
                      uint64_t m,
                      uint64_t b,
                      uint64_t n,
                      uint64_t *out_a,
                      uint64_t *out_m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFFINE_TOEPLITZ_H */
