#ifndef QLAP_H
#define QLAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum QlapStatus {
  QLAP_STATUS_OK = 0,
  QLAP_STATUS_NULL_POINTER = 1,
  QLAP_STATUS_INVALID_INPUT = 2,
  QLAP_STATUS_INADMISSIBLE = 3,
  QLAP_STATUS_INTERNAL = 4,
  QLAP_STATUS_PANIC = 5,
} QlapStatus;

/**
 * A surgery presentation.
 */
typedef struct QlapManifold QlapManifold;

/**
 * A truncated universal series.
 */
typedef struct QlapSeries QlapSeries;

/**
 * An exact value in a cyclotomic field.
 */
typedef struct QlapValue QlapValue;

/**
 * The message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next qlap call on the same thread.
 */
const char *qlap_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from a qlap `_to_json` call, or be null.
 */
void qlap_string_free(char *s);

/**
 * Looks up a built-in manifold. `b` is read only for `lens-b-1`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QlapStatus qlap_manifold_builtin(const char *name, int64_t b, struct QlapManifold **out);

/**
 * Parses a manifold from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QlapStatus qlap_manifold_from_json(const char *json, struct QlapManifold **out);

/**
 * # Safety
 * `m` must come from a qlap constructor, or be null.
 */
void qlap_manifold_free(struct QlapManifold *m);

/**
 * The first `terms` coefficients of the universal series of `m`.
 *
 * # Safety
 * `m` must be a live manifold handle and `out` a valid pointer.
 */
enum QlapStatus qlap_series_compute(const struct QlapManifold *m,
                                    uintptr_t terms,
                                    struct QlapSeries **out);

/**
 * The series as JSON; release with [`qlap_string_free`].
 *
 * # Safety
 * `s` must be a live series handle and `out` a valid pointer.
 */
enum QlapStatus qlap_series_to_json(const struct QlapSeries *s, char **out);

/**
 * # Safety
 * `s` must come from [`qlap_series_compute`], or be null.
 */
void qlap_series_free(struct QlapSeries *s);

/**
 * τ' of `m` at v = ζ_order^primitive. `refined` is 0 or 1 for a refinement, −1 for none.
 *
 * # Safety
 * `m` must be a live manifold handle and `out` a valid pointer.
 */
enum QlapStatus qlap_value_eval(const struct QlapManifold *m,
                                uint32_t order,
                                int64_t primitive,
                                int32_t refined,
                                struct QlapValue **out);

/**
 * The value as JSON; release with [`qlap_string_free`].
 *
 * # Safety
 * `x` must be a live value handle and `out` a valid pointer.
 */
enum QlapStatus qlap_value_to_json(const struct QlapValue *x, char **out);

/**
 * Writes 1 to `out` when the value is an algebraic integer, 0 otherwise.
 *
 * # Safety
 * `x` must be a live value handle and `out` a valid pointer.
 */
enum QlapStatus qlap_value_is_algebraic_integer(const struct QlapValue *x, int32_t *out);

/**
 * # Safety
 * `x` must come from [`qlap_value_eval`], or be null.
 */
void qlap_value_free(struct QlapValue *x);

#endif  /* QLAP_H */
