#ifndef ANNULUS_LAB_H
#define ANNULUS_LAB_H

/* Generated by cbindgen from annulus-lab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call. `Ok` is zero so the C side can test
// `if (annulus_...(...))` for failure.
typedef enum annulus_status {
  ANNULUS_STATUS_OK = 0,
  // A required pointer argument was null.
  ANNULUS_STATUS_NULL_POINTER = 1,
  // An argument was out of the documented domain.
  ANNULUS_STATUS_INVALID_ARGUMENT = 2,
  // The computation left the representable range of `double`.
  ANNULUS_STATUS_OVERFLOW = 3,
  // A numeric search failed to bracket or converge.
  ANNULUS_STATUS_ROOT_FINDING = 4,
  // The requested configuration exists but is not stationary
  // (tension triple violating the strict triangle inequality).
  ANNULUS_STATUS_NOT_BALANCED = 5,
} annulus_status;

// Opaque radial profile handle. Create with `annulus_profile_fit`,
// release with `annulus_profile_free`.
typedef struct annulus_profile annulus_profile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Fits the closed-form radial profile with modulus parameter `a` through
// boundary radii `r_minus` (at Z = -1) and `r_plus` (at Z = +1) and
// writes a heap-allocated handle to `*out`.
//
// # Safety
// `out` must be a valid pointer to writable memory for one pointer.
enum annulus_status annulus_profile_fit(double a,
                                        double r_minus,
                                        double r_plus,
                                        struct annulus_profile **out);

// Evaluates the profile radius at `z` in [-1, 1] into `*out`.
//
// # Safety
// `profile` must come from `annulus_profile_fit` and not yet be freed;
// `out` must be valid for one `double`.
enum annulus_status annulus_profile_eval(const struct annulus_profile *profile,
                                         double z,
                                         double *out);

// Dirichlet energy of the profile under its stationary metric, into `*out`.
//
// # Safety
// Same pointer contract as [`annulus_profile_eval`].
enum annulus_status annulus_profile_energy(const struct annulus_profile *profile, double *out);

// Releases a profile handle. Null is accepted and ignored.
//
// # Safety
// `profile` must be null or a handle from `annulus_profile_fit` that has
// not been freed before.
void annulus_profile_free(struct annulus_profile *profile);

// Finds waist parameters `c` solving `c cosh(h/c) = r`. Writes up to two
// ascending roots into `roots` and their count (0, 1, or 2) into `*count`.
// Zero roots is a success: the boundary rings admit no such surface.
//
// # Safety
// `roots` must be valid for two `double`s, `count` for one `size_t`.
enum annulus_status annulus_find_catenoids(double r, double h, double *roots, uintptr_t *count);

// Meridian position of the thinnest point of the antibubble family at
// thickness `eps`, into `*out`.
//
// # Safety
// `out` must be valid for one `double`.
enum annulus_status annulus_neck_position(double eps, double *out);

// Dimension of the space of stationary configurations with `n` boundary
// circles (n >= 3), into `*out`.
//
// # Safety
// `out` must be valid for one `uint32_t`.
enum annulus_status annulus_moduli_dim(uint32_t n, uint32_t *out);

// Angles between consecutive segments of the stationary triple junction
// with tensions `(t1, t2, t3)`, written to `angles[0..3]` in radians.
// Returns `NotBalanced` (without touching `angles`) when no stationary
// junction exists for these tensions.
//
// # Safety
// `angles` must be valid for three `double`s.
enum annulus_status annulus_balance_angles(double t1, double t2, double t3, double *angles);

// Library version as a static NUL-terminated string; never free it.
const char *annulus_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* ANNULUS_LAB_H */
