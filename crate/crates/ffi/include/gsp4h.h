#ifndef GSP4H_H
#define GSP4H_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Gsp4hStatus {
  GSP4H_STATUS_OK = 0,
  /**
   * Malformed or out-of-range input.
   */
  GSP4H_STATUS_INVALID = 2,
  /**
   * Parameters on the degeneracy locus.
   */
  GSP4H_STATUS_DEGENERATE = 3,
  GSP4H_STATUS_NULL_POINTER = 4,
  GSP4H_STATUS_INVALID_UTF8 = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  GSP4H_STATUS_PANIC = 6,
} Gsp4hStatus;

/**
 * Kernel of the summed tangent map at a rational point `(a, b)`.
 */
typedef struct Gsp4hKernel Gsp4hKernel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the kernel at `(a, b)`, given as rational strings such as `"3/2"`.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated strings; `out` must be writable.
 */
enum Gsp4hStatus gsp4h_kernel_new(const char *a, const char *b, struct Gsp4hKernel **out);

/**
 * # Safety
 * `k` must come from [`gsp4h_kernel_new`] and not have been freed; null is ignored.
 */
void gsp4h_kernel_free(struct Gsp4hKernel *k);

/**
 * Rank of the tangent map, kernel dimension and glue dimension.
 *
 * # Safety
 * `k` must be a live handle; the output pointers must be writable.
 */
enum Gsp4hStatus gsp4h_kernel_dims(const struct Gsp4hKernel *k,
                                   size_t *rank,
                                   size_t *kernel_dim,
                                   size_t *glue_dim);

/**
 * Recovers `(a, b)` from the kernel alone. Both strings are owned by the caller.
 *
 * # Safety
 * `k` must be a live handle; `out_a` and `out_b` must be writable.
 */
enum Gsp4hStatus gsp4h_kernel_recover(const struct Gsp4hKernel *k, char **out_a, char **out_b);

/**
 * Runs a command on a JSON input document and returns the JSON report.
 * The returned status mirrors the report status; the report is produced
 * for invalid and degenerate inputs too.
 *
 * # Safety
 * `command` and `document` must be NUL-terminated (document may be null for
 * commands without input); `out_json` must be writable.
 */
enum Gsp4hStatus gsp4h_run(const char *command,
                           const char *document,
                           bool symbolic,
                           char **out_json);

/**
 * Message for the most recent failure on this thread, or null. Owned by the caller.
 */
char *gsp4h_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void gsp4h_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSP4H_H */
