#ifndef FINFREE_H
#define FINFREE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `Ok` is zero; everything else is a failure.
 */
typedef enum FinfreeStatus {
  FINFREE_STATUS_OK = 0,
  FINFREE_STATUS_NULL_POINTER = 1,
  FINFREE_STATUS_INVALID_UTF8 = 2,
  FINFREE_STATUS_PARSE = 3,
  FINFREE_STATUS_DOMAIN = 4,
  FINFREE_STATUS_SIZE_LIMIT = 5,
  FINFREE_STATUS_DIMENSION = 6,
  FINFREE_STATUS_TRUNCATION = 7,
  FINFREE_STATUS_INTERNAL = 8,
} FinfreeStatus;

/**
 * Opaque polynomial handle; release with [`finfree_poly_free`].
 */
typedef struct FinfreePoly FinfreePoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *finfree_version(void);

/**
 * Message for the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *finfree_last_error(void);

/**
 * Monic polynomial from `a_0..a_d` (`len = d + 1`, `a_0 = 1`), each `"num/den"`.
 *
 * # Safety
 * `coeffs` must point to `len` valid C strings; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_from_coeffs(const char *const *coeffs,
                                            size_t len,
                                            struct FinfreePoly **out);

/**
 * `prod (x - r_i)` from `len` roots, each `"num/den"`.
 *
 * # Safety
 * `roots` must point to `len` valid C strings; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_from_roots(const char *const *roots,
                                           size_t len,
                                           struct FinfreePoly **out);

/**
 * Polynomial from JSON, `{"a": [...]}` or `{"roots": [...]}`.
 *
 * # Safety
 * `json` must be a valid C string; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_from_json(const char *json, struct FinfreePoly **out);

/**
 * Family member of degree `d`; `selector` is `hermite`, `power:A` or `laguerre:L`.
 *
 * # Safety
 * `selector` must be a valid C string; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_family(const char *selector, size_t d, struct FinfreePoly **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `p` must come from this library and not be freed twice.
 */
void finfree_poly_free(struct FinfreePoly *p);

/**
 * Degree of `p`, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t finfree_poly_degree(const struct FinfreePoly *p);

/**
 * `{"d": d, "a": [...]}`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_to_json(const struct FinfreePoly *p, char **out);

/**
 * Coefficient `a_i` as `"num/den"`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_coeff(const struct FinfreePoly *p, size_t i, char **out);

/**
 * `p boxplus_d q`.
 *
 * # Safety
 * `p`, `q` must be live handles; `out` must be writable.
 */
enum FinfreeStatus finfree_boxplus(const struct FinfreePoly *p,
                                   const struct FinfreePoly *q,
                                   struct FinfreePoly **out);

/**
 * `p boxtimes_d q`.
 *
 * # Safety
 * `p`, `q` must be live handles; `out` must be writable.
 */
enum FinfreeStatus finfree_boxtimes(const struct FinfreePoly *p,
                                    const struct FinfreePoly *q,
                                    struct FinfreePoly **out);

/**
 * Finite free cumulants `kappa_1..kappa_d` as a JSON array of strings.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_cumulants(const struct FinfreePoly *p, char **out);

/**
 * Moments `m_1..m_n` as a JSON array of strings.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum FinfreeStatus finfree_poly_moments(const struct FinfreePoly *p, size_t n, char **out);

/**
 * `m_n` of a family as a polynomial in `1/d`, e.g. `"1 - 1/d"`.
 *
 * # Safety
 * `selector` must be a valid C string; `out` must be writable.
 */
enum FinfreeStatus finfree_expand(const char *selector, size_t n, char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void finfree_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINFREE_H */
