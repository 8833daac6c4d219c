#ifndef ACHTERBAHN_H
#define ACHTERBAHN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AchStatus {
  ACH_STATUS_OK = 0,
  ACH_STATUS_NULL_POINTER = 1,
  ACH_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A string argument is not valid UTF-8.
   */
  ACH_STATUS_UTF8 = 3,
  ACH_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * The operation needs data the object does not have, e.g. clocking a
   * register whose feedback is unknown.
   */
  ACH_STATUS_UNSUPPORTED = 5,
  ACH_STATUS_KEYSTREAM_LIMIT = 6,
  ACH_STATUS_PANIC = 7,
} AchStatus;

typedef struct AchCipher AchCipher;

/**
 * Register fills of a key-loaded cipher.
 */
typedef struct AchState AchState;

/**
 * Boolean function on `n <= 20` variables.
 */
typedef struct AchTruthTable AchTruthTable;

typedef struct AchProfile {
  size_t n;
  bool balanced;
  uint32_t algebraic_degree;
  /**
   * -1 when unbalanced.
   */
  int32_t resiliency_order;
  uint64_t nonlinearity;
  uint32_t algebraic_immunity;
} AchProfile;

/**
 * log2 figures of one attack plan. `log2_folded_time` is NaN when the plan
 * has no folded variant.
 */
typedef struct AchEstimate {
  uint64_t parity_terms;
  double log2_samples;
  double log2_data;
  double log2_time;
  double log2_time_with_terms;
  double log2_folded_time;
} AchEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes) and returns its full length in bytes.
 * `buf` may be null to query the length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ach_last_error(char *buf, size_t len);

/**
 * Library version, a static NUL-terminated string.
 */
const char *ach_version(void);

/**
 * Parses an ANF such as `"x_0 + x_1x_2"` over `n` variables.
 *
 * # Safety
 * `anf` must be a NUL-terminated string; `out` must be writable.
 */
enum AchStatus ach_truth_table_from_anf(const char *anf,
                                        size_t n,
                                        struct AchTruthTable **out_table);

/**
 * `"F"` (13 variables) or `"G"` (11 variables).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum AchStatus ach_truth_table_builtin(const char *name, struct AchTruthTable **out_table);

/**
 * # Safety
 * `table` must be null or a handle from this library, not yet freed.
 */
void ach_truth_table_free(struct AchTruthTable *table);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum AchStatus ach_truth_table_vars(const struct AchTruthTable *table, size_t *out_n);

/**
 * Writes the `2^n` Walsh coefficients.
 *
 * # Safety
 * `table` must be a live handle; `out` must hold `len` values.
 */
enum AchStatus ach_truth_table_walsh(const struct AchTruthTable *table, int32_t *out_w, size_t len);

/**
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum AchStatus ach_truth_table_profile(const struct AchTruthTable *table, struct AchProfile *out_p);

/**
 * Bias `eps` of the linear function selected by `mask` (bit `i` = `x_i`):
 * `Pr[f = l] = (1 + eps) / 2`.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum AchStatus ach_truth_table_bias(const struct AchTruthTable *table,
                                    uint64_t mask,
                                    double *out_eps);

/**
 * `"a128"`, `"a80"` or `"toy"`. Only the toy cipher can be key-loaded.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum AchStatus ach_cipher_builtin(const char *name, struct AchCipher **out_cipher);

/**
 * # Safety
 * `cipher` must be null or a handle from this library, not yet freed.
 */
void ach_cipher_free(struct AchCipher *cipher);

/**
 * # Safety
 * `cipher` must be a live handle; `out` must be writable.
 */
enum AchStatus ach_cipher_register_count(const struct AchCipher *cipher, size_t *out_n);

/**
 * Key loading. Key and IV are bit strings packed most significant bit
 * first; `key_bits`/`iv_bits` give their lengths. `hold_first` selects the
 * mixing variant that injects the first combiner output on every clock.
 *
 * # Safety
 * `key`/`iv` must hold `ceil(bits / 8)` bytes; `cipher` must be a live
 * handle; `out` must be writable.
 */
enum AchStatus ach_key_load(const struct AchCipher *cipher,
                            const uint8_t *key,
                            size_t key_bits,
                            const uint8_t *iv,
                            size_t iv_bits,
                            bool hold_first,
                            struct AchState **out_state);

/**
 * Builds a state from explicit fills, one per register in cipher order.
 *
 * # Safety
 * `fills` must hold `count` values; `cipher` must be a live handle; `out`
 * must be writable.
 */
enum AchStatus ach_state_from_fills(const struct AchCipher *cipher,
                                    const uint64_t *fills,
                                    size_t count,
                                    struct AchState **out_state);

/**
 * # Safety
 * `state` must be null or a handle from this library, not yet freed.
 */
void ach_state_free(struct AchState *state);

/**
 * Copies the register fills (bit `i` = cell `i`).
 *
 * # Safety
 * `state` must be a live handle; `out` must hold `len` values.
 */
enum AchStatus ach_state_fills(const struct AchState *state, uint64_t *out_fills, size_t len);

/**
 * Writes keystream bits `S(t0) .. S(t0 + count - 1)`, one 0/1 byte each.
 *
 * # Safety
 * `state` must be a live handle; `out` must hold `count` bytes.
 */
enum AchStatus ach_state_keystream(const struct AchState *state,
                                   uint64_t t0,
                                   uint8_t *out_bits,
                                   size_t count);

/**
 * Complexity of a built-in plan (`"v2"`, `"a80"`, `"a128"`, `"toy"`, ...)
 * with the default cost model.
 *
 * # Safety
 * `plan` must be a NUL-terminated string; `out` must be writable.
 */
enum AchStatus ach_estimate_builtin(const char *plan, double d, struct AchEstimate *out_est);

/**
 * Samples `ceil(d / eps^2)` and error probability `Phi(-sqrt(d) / 2)` of the
 * distinguisher for bias `eps`.
 *
 * # Safety
 * Both outputs must be writable.
 */
enum AchStatus ach_sample_size(double epsilon, double d, uint64_t *out_samples, double *out_error);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACHTERBAHN_H */
