#ifndef ORN_H
#define ORN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrnStatus {
  ORN_STATUS_OK = 0,
  ORN_STATUS_NULL_POINTER = 1,
  ORN_STATUS_INVALID_UTF8 = 2,
  ORN_STATUS_PARSE = 3,
  ORN_STATUS_DOMAIN = 4,
  ORN_STATUS_PANIC = 5,
} OrnStatus;

/**
 * An open reaction network with rates.
 */
typedef struct OrnNet OrnNet;

/**
 * A simulated trajectory: rows of `(t, c)`.
 */
typedef struct OrnTrajectory OrnTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *orn_last_error_message(void);

/**
 * Parses `.orn` text.
 *
 * # Safety
 * `text` must be a valid nul-terminated string; `out` must be writable.
 */
enum OrnStatus orn_net_parse(const char *text, struct OrnNet **out);

/**
 * # Safety
 * `net` must come from this library and not be freed twice. Null is a no-op.
 */
void orn_net_free(struct OrnNet *net);

/**
 * `g ∘ f`: glues the outputs of `f` to the inputs of `g`.
 *
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_compose(const struct OrnNet *f, const struct OrnNet *g, struct OrnNet **out);

/**
 * # Safety
 * Handles must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_tensor(const struct OrnNet *a, const struct OrnNet *b, struct OrnNet **out);

/**
 * # Safety
 * `a` must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_dagger(const struct OrnNet *a, struct OrnNet **out);

/**
 * Number of species in the apex.
 *
 * # Safety
 * `a` must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_species_count(const struct OrnNet *a, size_t *out);

/**
 * Canonical `.orn` text.
 *
 * # Safety
 * `a` must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_render(const struct OrnNet *a, char **out);

/**
 * Open rate equations; nonzero `latex` selects LaTeX output.
 *
 * # Safety
 * `a` must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_equations(const struct OrnNet *a, int latex, char **out);

/**
 * RK4 simulation from `c0` (species in canonical order). `inflow` and
 * `outflow` use the command-line syntax `point=expr,…` and may be null.
 *
 * # Safety
 * `c0` must point to `len` doubles; strings must be nul-terminated or null;
 * `out` must be writable.
 */
enum OrnStatus orn_net_simulate(const struct OrnNet *a,
                                const double *c0,
                                size_t len,
                                const char *inflow,
                                const char *outflow,
                                double t_end,
                                double dt,
                                struct OrnTrajectory **out);

/**
 * Number of rows, or 0 for a null handle.
 *
 * # Safety
 * `t` must be valid or null.
 */
size_t orn_trajectory_rows(const struct OrnTrajectory *t);

/**
 * Number of species per row, or 0 for a null handle.
 *
 * # Safety
 * `t` must be valid or null.
 */
size_t orn_trajectory_species(const struct OrnTrajectory *t);

/**
 * Copies row `row` into `time` and `values[0..len]`.
 *
 * # Safety
 * `t` must be valid; `time` writable; `values` must have room for `len`
 * doubles.
 */
enum OrnStatus orn_trajectory_row(const struct OrnTrajectory *t,
                                  size_t row,
                                  double *time,
                                  double *values,
                                  size_t len);

/**
 * # Safety
 * `t` must come from this library and not be freed twice. Null is a no-op.
 */
void orn_trajectory_free(struct OrnTrajectory *t);

/**
 * Samples the steady-state relation and returns it as JSON.
 *
 * # Safety
 * `a` must be valid; `out` must be writable.
 */
enum OrnStatus orn_net_blackbox_json(const struct OrnNet *a,
                                     size_t samples,
                                     uint64_t seed,
                                     char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is a no-op.
 */
void orn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORN_H */
