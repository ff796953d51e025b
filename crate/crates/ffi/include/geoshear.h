#ifndef GEOSHEAR_H
#define GEOSHEAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the first six match the command-line exit codes.
 */
typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_VIOLATED = 1,
  GS_STATUS_INVALID_ARGUMENT = 2,
  GS_STATUS_NUMERIC = 3,
  GS_STATUS_INCONCLUSIVE = 4,
  GS_STATUS_IO = 5,
  GS_STATUS_NULL_POINTER = 6,
  GS_STATUS_PANIC = 7,
} GsStatus;

/**
 * Opaque analytic function.
 */
typedef struct GsFunction GsFunction;

/**
 * Opaque harmonic shear `H + conj(G)`.
 */
typedef struct GsShear GsShear;

typedef struct GsComplex {
  double re;
  double im;
} GsComplex;

/**
 * Inputs of [`gs_bound`]; unused fields are ignored.
 */
typedef struct GsBoundInputs {
  double alpha;
  double beta;
  double delta;
  double gamma;
  double c;
  double r;
  double norm_w;
  double norm_w_star;
} GsBoundInputs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *gs_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gs_version(void);

/**
 * Builtin family by name: identity, cayley, koebe, twostrip, logmap.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum GsStatus gs_function_builtin(const char *name, struct GsFunction **out);

/**
 * Function from an expression in `z`.
 *
 * # Safety
 * `src` must be a NUL-terminated string; `out` must be writable.
 */
enum GsStatus gs_function_parse(const char *src, struct GsFunction **out);

/**
 * `rotate(C_{αβ}[φ], θ)` as a new function handle.
 *
 * # Safety
 * `phi` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_transform(const struct GsFunction *phi,
                           double alpha,
                           double beta,
                           double theta,
                           struct GsFunction **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_function_eval(const struct GsFunction *f,
                               struct GsComplex z,
                               struct GsComplex *out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_function_deriv(const struct GsFunction *f,
                                struct GsComplex z,
                                struct GsComplex *out);

/**
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void gs_function_free(struct GsFunction *f);

/**
 * Shear of `rotate(C_{αβ}[φ], θ)` with dilatation `α(1+β) w`.
 *
 * # Safety
 * `phi` and `w` must be live handles; `out` must be writable.
 */
enum GsStatus gs_shear_build(const struct GsFunction *phi,
                             const struct GsFunction *w,
                             double alpha,
                             double beta,
                             double theta,
                             struct GsShear **out);

/**
 * Shear with `H - G = phi` and dilatation `omega`.
 *
 * # Safety
 * `phi` and `omega` must be live handles; `out` must be writable.
 */
enum GsStatus gs_shear_solve(const struct GsFunction *phi,
                             const struct GsFunction *omega,
                             struct GsShear **out);

/**
 * `F(z) = H(z) + conj(G(z))`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_shear_eval(const struct GsShear *s, struct GsComplex z, struct GsComplex *out);

/**
 * `H(z)` and `G(z)`.
 *
 * # Safety
 * `s` must be a live handle; `h` and `g` must be writable.
 */
enum GsStatus gs_shear_parts(const struct GsShear *s,
                             struct GsComplex z,
                             struct GsComplex *h,
                             struct GsComplex *g);

/**
 * Dilatation `ω(z) = G'(z)/H'(z)`.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
enum GsStatus gs_shear_dilatation(const struct GsShear *s,
                                  struct GsComplex z,
                                  struct GsComplex *out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void gs_shear_free(struct GsShear *s);

/**
 * Harmonic Becker functional over a polar grid: writes the grid sup and
 * returns `GS_STATUS_OK` (certified), `GS_STATUS_VIOLATED` or `GS_STATUS_INCONCLUSIVE`.
 *
 * # Safety
 * `s` must be a live handle; `sup` must be writable.
 */
enum GsStatus gs_check_becker_harmonic(const struct GsShear *s,
                                       size_t radii,
                                       size_t angles,
                                       double *sup);

/**
 * Sampled injectivity test of the shear. Returns `GS_STATUS_VIOLATED` and
 * writes the colliding preimages when a collision is found, `GS_STATUS_OK`
 * otherwise (no collision found, not a proof).
 *
 * # Safety
 * `s` must be a live handle; `z1` and `z2` must be writable.
 */
enum GsStatus gs_check_injectivity(const struct GsShear *s,
                                   uint64_t seed,
                                   struct GsComplex *z1,
                                   struct GsComplex *z2);

/**
 * Self-intersection test of the image of `|z| = 0.995`.
 *
 * # Safety
 * `s` must be a live handle.
 */
enum GsStatus gs_check_boundary(const struct GsShear *s);

/**
 * Defaults: γ = 2, r = 1, norms 1, everything else 0.
 */
struct GsBoundInputs gs_bound_inputs_default(void);

/**
 * Evaluate a theorem's calculator (`thm31`, `shcc`, `lif-univ`, ...).
 * Writes the headline number; returns `GS_STATUS_VIOLATED` when the
 * theorem's condition fails for the given α.
 *
 * # Safety
 * `theorem` must be a NUL-terminated string; `inputs` readable; `value` writable.
 */
enum GsStatus gs_bound(const char *theorem, const struct GsBoundInputs *inputs, double *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOSHEAR_H */
