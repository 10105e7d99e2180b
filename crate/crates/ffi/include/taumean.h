#ifndef TAUMEAN_H
#define TAUMEAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum TmStatus {
  TM_STATUS_OK = 0,
  TM_STATUS_NULL_POINTER = 1,
  TM_STATUS_RANGE = 2,
  TM_STATUS_RESOURCE = 3,
  TM_STATUS_DOMAIN = 4,
  TM_STATUS_POLE = 5,
  TM_STATUS_SOLVER = 6,
  TM_STATUS_CONTOUR = 7,
  TM_STATUS_CONFIG = 8,
  TM_STATUS_SCALE = 9,
  TM_STATUS_IO = 10,
  /**
   * A result does not fit the C type (e.g. a τ-sum above 2^64).
   */
  TM_STATUS_OVERFLOW = 11,
  TM_STATUS_PANIC = 12,
} TmStatus;

/**
 * Sequence selector for enumerations and statistics.
 */
typedef enum TmSequence {
  /**
   * θ(n) = t·n; needs `t_num`/`t_den`.
   */
  TM_SEQUENCE_DENSE = 0,
  /**
   * θ(n) = σ(n) + 1.
   */
  TM_SEQUENCE_PRACTICAL = 1,
} TmSequence;

/**
 * Members of a sequence, ascending.
 */
typedef struct TmEnumeration TmEnumeration;

/**
 * Truncated g(s) evaluator.
 */
typedef struct TmGEvaluator TmGEvaluator;

/**
 * Smallest-prime-factor table.
 */
typedef struct TmSpfTable TmSpfTable;

/**
 * δ, λ₀ and λ₁.
 */
typedef struct TmConstants {
  double delta;
  double lambda0;
  double lambda1;
} TmConstants;

/**
 * g(s) or g'(s) with its error estimate.
 */
typedef struct TmComplexValue {
  double re;
  double im;
  double quad_err;
  double tail_bound;
} TmComplexValue;

/**
 * Count, τ-sum and harmonic sum of a truncated sequence.
 */
typedef struct TmStats {
  uint64_t x;
  uint64_t count;
  uint64_t tau_sum;
  double harmonic;
} TmStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *tm_last_error_message(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *tm_version(void);

/**
 * ω(u).
 */
enum TmStatus tm_omega(double u, double *out);

/**
 * ξ(u).
 */
enum TmStatus tm_xi(double u, double *out);

/**
 * λ(v).
 */
enum TmStatus tm_lambda(double v, double *out);

/**
 * δ, λ₀ and λ₁ (computed once per process).
 */
enum TmStatus tm_core_constants(struct TmConstants *out);

/**
 * New evaluator for g truncated at `v_trunc`.
 */
enum TmStatus tm_g_evaluator_new(double v_trunc, struct TmGEvaluator **out);

void tm_g_evaluator_free(struct TmGEvaluator *ev);

/**
 * g(re + i im).
 */
enum TmStatus tm_g_eval(const struct TmGEvaluator *ev,
                        double re,
                        double im,
                        struct TmComplexValue *out);

/**
 * g'(re + i im).
 */
enum TmStatus tm_g_prime_eval(const struct TmGEvaluator *ev,
                              double re,
                              double im,
                              struct TmComplexValue *out);

/**
 * Smallest-prime-factor table for 1..=limit.
 */
enum TmStatus tm_spf_table_new(uint64_t limit, struct TmSpfTable **out);

void tm_spf_table_free(struct TmSpfTable *t);

enum TmStatus tm_tau(const struct TmSpfTable *t, uint64_t n, uint64_t *out);

enum TmStatus tm_sigma(const struct TmSpfTable *t, uint64_t n, uint64_t *out);

/**
 * Count, τ-sum and harmonic sum of the dense (t = t_num/t_den) or practical
 * sequence up to x. `t_num`/`t_den` are ignored for practical numbers.
 */
enum TmStatus tm_sequence_stats(enum TmSequence seq,
                                uint64_t t_num,
                                uint64_t t_den,
                                uint64_t x,
                                struct TmStats *out);

/**
 * Φ(x, y), S(x, y) and the harmonic sum over y-rough n ≤ x, using `table`
 * (which must reach x).
 */
enum TmStatus tm_rough_stats(const struct TmSpfTable *t, uint64_t x, double y, struct TmStats *out);

/**
 * Members of the dense or practical sequence up to x, ascending.
 */
enum TmStatus tm_enumerate(enum TmSequence seq,
                           uint64_t t_num,
                           uint64_t t_den,
                           uint64_t x,
                           struct TmEnumeration **out);

/**
 * Number of members; 0 for NULL.
 */
size_t tm_enumeration_len(const struct TmEnumeration *e);

/**
 * Pointer to the members, valid until the handle is freed; NULL for NULL.
 */
const uint64_t *tm_enumeration_data(const struct TmEnumeration *e);

void tm_enumeration_free(struct TmEnumeration *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAUMEAN_H */
