/* C interface to the cohcfg coherent-configuration library. */

#ifndef COHCFG_H
#define COHCFG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How the most recent call on this thread ended.
 */
typedef enum CcStatus {
  /**
   * The call succeeded.
   */
  CcStatus_Ok = 0,
  /**
   * The mathematics failed: a certificate does not hold or cannot be
   * produced. Matches the CLI's exit code 1.
   */
  CcStatus_MathFailure = 1,
  /**
   * The input was unusable: unreadable file, malformed scheme, axiom
   * violation, out-of-range index. Matches the CLI's exit code 2.
   */
  CcStatus_InvalidInput = 2,
  /**
   * A required pointer argument was NULL.
   */
  CcStatus_NullArgument = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  CcStatus_InvalidUtf8 = 4,
} CcStatus;

/**
 * A parsed and validated coherent configuration.
 */
typedef struct CcScheme CcScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Status of the most recent call on this thread.
 */
enum CcStatus cc_last_status(void);

/**
 * Message for the most recent failure on this thread, or NULL after a
 * success. The pointer is owned by the library and valid until the next
 * call on the same thread; do not free it.
 */
const char *cc_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer previously returned by one of the
 * string-returning functions here, not yet freed.
 */
void cc_string_free(char *s);

/**
 * Parses and validates scheme text. NULL on failure.
 *
 * # Safety
 * `text` must be NULL or a NUL-terminated byte string.
 */
struct CcScheme *cc_scheme_parse(const char *text);

/**
 * Reads and validates a scheme file. NULL on failure.
 *
 * # Safety
 * `path` must be NULL or a NUL-terminated byte string.
 */
struct CcScheme *cc_scheme_read_file(const char *path);

/**
 * Renders a scheme in the file grammar. Free with [`cc_string_free`].
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
char *cc_scheme_to_string(const struct CcScheme *scheme);

/**
 * Releases a scheme handle.
 *
 * # Safety
 * `scheme` must be NULL or a handle returned by this library, not yet
 * freed.
 */
void cc_scheme_free(struct CcScheme *scheme);

/**
 * Number of points. Zero when `scheme` is NULL.
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
uintptr_t cc_scheme_order(const struct CcScheme *scheme);

/**
 * Number of colors. Zero when `scheme` is NULL.
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
uintptr_t cc_scheme_rank(const struct CcScheme *scheme);

/**
 * Whether the configuration has a single fiber.
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
bool cc_scheme_is_homogeneous(const struct CcScheme *scheme);

/**
 * Wreath product of two schemes. NULL on failure.
 *
 * # Safety
 * `a` and `b` must be NULL or live scheme handles.
 */
struct CcScheme *cc_wreath(const struct CcScheme *a, const struct CcScheme *b);

/**
 * Direct (tensor) product of two configurations. NULL on failure.
 *
 * # Safety
 * `a` and `b` must be NULL or live scheme handles.
 */
struct CcScheme *cc_direct_product(const struct CcScheme *a, const struct CcScheme *b);

/**
 * Direct sum of two configurations. NULL on failure.
 *
 * # Safety
 * `a` and `b` must be NULL or live scheme handles.
 */
struct CcScheme *cc_direct_sum(const struct CcScheme *a, const struct CcScheme *b);

/**
 * One-point extension at `point`. NULL on failure.
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
struct CcScheme *cc_one_point_extension(const struct CcScheme *scheme, uintptr_t point);

/**
 * Quasi-thin profile at `y0` as JSON. NULL on failure; free with
 * [`cc_string_free`].
 *
 * # Safety
 * `scheme` must be NULL or a live scheme handle.
 */
char *cc_analyze_json(const struct CcScheme *scheme, uintptr_t y0);

/**
 * Certifies the central primitive idempotent decomposition of the
 * Terwilliger algebra of `x ≀ y` at `(x0, y0)` and returns the full report
 * as JSON. The report's `pass` field carries the verdict; NULL only on a
 * hard failure. Free with [`cc_string_free`].
 *
 * # Safety
 * `x` and `y` must be NULL or live scheme handles.
 */
char *cc_verify_json(const struct CcScheme *x,
                     const struct CcScheme *y,
                     uintptr_t x0,
                     uintptr_t y0,
                     double tol);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COHCFG_H */
