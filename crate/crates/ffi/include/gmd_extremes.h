#ifndef GMD_EXTREMES_H
#define GMD_EXTREMES_H

/* Generated by cbindgen from gmd-extremes-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Call outcome; `GMDX_OK` is zero so callers can test with `!status`.
typedef enum {
  GMDX_OK = 0,
  GMDX_NULL_POINTER = 1,
  GMDX_DOMAIN_ERROR = 2,
  GMDX_NUMERIC_ERROR = 3,
  GMDX_USAGE_ERROR = 4,
} GmdxStatus;

// Distribution handle (shape, scale, and cached derived constants).
typedef struct GmdxDist GmdxDist;

// Solved norming handle; carries its parent distribution so level and law
// evaluations need only this handle.
typedef struct GmdxNorming GmdxNorming;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the library, static storage.
const char *gmdx_version(void);

// Static message for a status code.
const char *gmdx_status_message(GmdxStatus status);

// Creates a distribution handle for shape k > 0 and scale sigma > 0.
//
// # Safety
// `out` must be a valid pointer; on `GMDX_OK` it receives an owned handle
// that must be released with `gmdx_dist_free`.
GmdxStatus gmdx_dist_new(double k, double sigma, GmdxDist **out);

// Releases a distribution handle; null is a no-op.
//
// # Safety
// `dist` must be null or a handle from `gmdx_dist_new` not yet freed.
void gmdx_dist_free(GmdxDist *dist);

// Density f(x).
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_dist_pdf(const GmdxDist *dist, double x, double *out);

// Distribution function F(x).
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_dist_cdf(const GmdxDist *dist, double x, double *out);

// Survival function 1 - F(x), relative-accurate in the upper tail.
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_dist_sf(const GmdxDist *dist, double x, double *out);

// Quantile at probability q in (0, 1).
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_dist_quantile(const GmdxDist *dist, double q, double *out);

// Mills-type tail approximation of sf(x) with 1, 2, or 3 series terms.
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_dist_mills_tail(const GmdxDist *dist, double x, uint32_t terms, double *out);

// Fills `buf[0..len]` with i.i.d. draws, deterministic in `seed`.
//
// # Safety
// `dist` must be valid and `buf` must point to at least `len` doubles.
GmdxStatus gmdx_dist_sample(const GmdxDist *dist, uint64_t seed, size_t len, double *buf);

// Solves the norming level for sample size n (3 <= n <= 1e300).
//
// # Safety
// `dist` and `out` must be valid pointers; on `GMDX_OK` the handle must be
// released with `gmdx_norming_free`.
GmdxStatus gmdx_norming_new(const GmdxDist *dist, double n, GmdxNorming **out);

// Releases a norming handle; null is a no-op.
//
// # Safety
// `nm` must be null or a handle from `gmdx_norming_new` not yet freed.
void gmdx_norming_free(GmdxNorming *nm);

// Reads the solved quantities; any out pointer may be null to skip it.
//
// # Safety
// `nm` must be a valid handle; non-null out pointers must be writable.
GmdxStatus gmdx_norming_info(const GmdxNorming *nm,
                             double *n,
                             double *b,
                             double *b_pow_2k,
                             double *t);

// Affine max level u(x, b_n).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_u_level(const GmdxNorming *nm, double x, double *out);

// Affine min level v(y, b_n) = -u(-y, b_n).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_v_level(const GmdxNorming *nm, double y, double *out);

// Gumbel distribution exp(-e^{-x}); total.
double gmdx_gumbel(double x);

// Complementary error function; total.
double gmdx_erfc(double x);

// First-order max-law correction coefficient l(x).
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_l_coeff(const GmdxDist *dist, double x, double *out);

// Second-order max-law correction coefficient w(x).
//
// # Safety
// `dist` and `out` must be valid pointers.
GmdxStatus gmdx_w_coeff(const GmdxDist *dist, double x, double *out);

// Joint correction coefficients at (x, y); null out pointers are skipped.
//
// # Safety
// `dist` must be valid; non-null out pointers must be writable.
GmdxStatus gmdx_joint_coeffs(const GmdxDist *dist,
                             double x,
                             double y,
                             double *l_joint,
                             double *w_joint,
                             double *c1,
                             double *c2);

// Order-1/2/3 approximant of P(M_n <= u(x, b_n)).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_approx_max_cdf(const GmdxNorming *nm, double x, uint32_t order, double *out);

// Order-1/2/3 approximant of P(m_n <= v(y, b_n)).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_approx_min_cdf(const GmdxNorming *nm, double y, uint32_t order, double *out);

// Order-1/2/3 approximant S_i of the joint cdf.
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_approx_joint_cdf(const GmdxNorming *nm,
                                 double x,
                                 double y,
                                 uint32_t order,
                                 double *out);

// Order-1/2/3 approximant T_i of the joint density.
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_approx_joint_pdf(const GmdxNorming *nm,
                                 double x,
                                 double y,
                                 uint32_t order,
                                 double *out);

// Exact P(M_n <= u(x, b_n)).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_exact_max_cdf(const GmdxNorming *nm, double x, double *out);

// Exact P(m_n <= v(y, b_n)).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_exact_min_cdf(const GmdxNorming *nm, double y, double *out);

// Exact joint cdf of the normalized (max, min) pair.
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_exact_joint_cdf(const GmdxNorming *nm, double x, double y, double *out);

// Exact joint density of the normalized (max, min) pair.
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_exact_joint_pdf(const GmdxNorming *nm, double x, double y, double *out);

// Log-law functional h(x, y); requires u(x) > v(y).
//
// # Safety
// `nm` and `out` must be valid pointers.
GmdxStatus gmdx_h_functional(const GmdxNorming *nm, double x, double y, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMD_EXTREMES_H */
