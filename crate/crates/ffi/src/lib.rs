//! C ABI over the gmd-extremes numeric kernel.
//!
//! Conventions: opaque handles created by `*_new` and released by the
//! matching `*_free`; every fallible call returns a [`GmdxStatus`] and
//! writes its result through an out pointer; total scalar functions
//! (`gmdx_gumbel`, `gmdx_erfc`) return the value directly. Passing a null
//! handle or out pointer yields `GMDX_NULL_POINTER`; no call unwinds across
//! the boundary.

use std::ffi::c_char;

use gmd_extremes::error::Error;
use gmd_extremes::exact::{self, JointPoint};
use gmd_extremes::expansions::{self, ApproxOrder};
use gmd_extremes::gmd::GmdParams;
use gmd_extremes::norming::{solve_norming, Norming};
use rand_chacha::rand_core::SeedableRng;

/// Call outcome; `GMDX_OK` is zero so callers can test with `!status`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmdxStatus {
    GmdxOk = 0,
    GmdxNullPointer = 1,
    GmdxDomainError = 2,
    GmdxNumericError = 3,
    GmdxUsageError = 4,
}

use GmdxStatus::*;

fn status_of(err: &Error) -> GmdxStatus {
    match err {
        Error::Domain(_) => GmdxDomainError,
        Error::Numeric(_) => GmdxNumericError,
        Error::Usage(_) => GmdxUsageError,
        Error::Io(_) => GmdxNumericError,
    }
}

/// Distribution handle (shape, scale, and cached derived constants).
pub struct GmdxDist {
    params: GmdParams,
}

/// Solved norming handle; carries its parent distribution so level and law
/// evaluations need only this handle.
pub struct GmdxNorming {
    params: GmdParams,
    norming: Norming,
}

/// Version string of the library, static storage.
#[no_mangle]
pub extern "C" fn gmdx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static message for a status code.
#[no_mangle]
pub extern "C" fn gmdx_status_message(status: GmdxStatus) -> *const c_char {
    let msg: &'static str = match status {
        GmdxOk => "ok\0",
        GmdxNullPointer => "null pointer argument\0",
        GmdxDomainError => "argument outside the operation's domain\0",
        GmdxNumericError => "numeric failure (no convergence)\0",
        GmdxUsageError => "invalid usage\0",
    };
    msg.as_ptr() as *const c_char
}

/// Creates a distribution handle for shape k > 0 and scale sigma > 0.
///
/// # Safety
/// `out` must be a valid pointer; on `GMDX_OK` it receives an owned handle
/// that must be released with `gmdx_dist_free`.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_new(k: f64, sigma: f64, out: *mut *mut GmdxDist) -> GmdxStatus {
    if out.is_null() {
        return GmdxNullPointer;
    }
    match GmdParams::new(k, sigma) {
        Ok(params) => {
            *out = Box::into_raw(Box::new(GmdxDist { params }));
            GmdxOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a distribution handle; null is a no-op.
///
/// # Safety
/// `dist` must be null or a handle from `gmdx_dist_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_free(dist: *mut GmdxDist) {
    if !dist.is_null() {
        drop(Box::from_raw(dist));
    }
}

unsafe fn write_value(out: *mut f64, value: f64) -> GmdxStatus {
    if out.is_null() {
        return GmdxNullPointer;
    }
    *out = value;
    GmdxOk
}

macro_rules! deref {
    ($ptr:expr) => {
        match $ptr.as_ref() {
            Some(r) => r,
            None => return GmdxNullPointer,
        }
    };
}

fn finite_guard(value: f64, what: &str) -> Result<(), GmdxStatus> {
    if value.is_finite() {
        Ok(())
    } else {
        let _ = what;
        Err(GmdxDomainError)
    }
}

/// Density f(x).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_pdf(dist: *const GmdxDist, x: f64, out: *mut f64) -> GmdxStatus {
    let d = deref!(dist);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, d.params.pdf(x))
}

/// Distribution function F(x).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_cdf(dist: *const GmdxDist, x: f64, out: *mut f64) -> GmdxStatus {
    let d = deref!(dist);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, d.params.cdf(x))
}

/// Survival function 1 - F(x), relative-accurate in the upper tail.
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_sf(dist: *const GmdxDist, x: f64, out: *mut f64) -> GmdxStatus {
    let d = deref!(dist);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, d.params.sf(x))
}

/// Quantile at probability q in (0, 1).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_quantile(
    dist: *const GmdxDist,
    q: f64,
    out: *mut f64,
) -> GmdxStatus {
    let d = deref!(dist);
    match d.params.quantile(q) {
        Ok(v) => write_value(out, v),
        Err(e) => status_of(&e),
    }
}

/// Mills-type tail approximation of sf(x) with 1, 2, or 3 series terms.
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_mills_tail(
    dist: *const GmdxDist,
    x: f64,
    terms: u32,
    out: *mut f64,
) -> GmdxStatus {
    let d = deref!(dist);
    match d.params.mills_tail(x, terms) {
        Ok(v) => write_value(out, v),
        Err(e) => status_of(&e),
    }
}

/// Fills `buf[0..len]` with i.i.d. draws, deterministic in `seed`.
///
/// # Safety
/// `dist` must be valid and `buf` must point to at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gmdx_dist_sample(
    dist: *const GmdxDist,
    seed: u64,
    len: usize,
    buf: *mut f64,
) -> GmdxStatus {
    let d = deref!(dist);
    if buf.is_null() {
        return GmdxNullPointer;
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let draws = d.params.sample(&mut rng, len);
    std::ptr::copy_nonoverlapping(draws.as_ptr(), buf, len);
    GmdxOk
}

/// Solves the norming level for sample size n (3 <= n <= 1e300).
///
/// # Safety
/// `dist` and `out` must be valid pointers; on `GMDX_OK` the handle must be
/// released with `gmdx_norming_free`.
#[no_mangle]
pub unsafe extern "C" fn gmdx_norming_new(
    dist: *const GmdxDist,
    n: f64,
    out: *mut *mut GmdxNorming,
) -> GmdxStatus {
    let d = deref!(dist);
    if out.is_null() {
        return GmdxNullPointer;
    }
    match solve_norming(&d.params, n) {
        Ok(norming) => {
            *out = Box::into_raw(Box::new(GmdxNorming {
                params: d.params,
                norming,
            }));
            GmdxOk
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a norming handle; null is a no-op.
///
/// # Safety
/// `nm` must be null or a handle from `gmdx_norming_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmdx_norming_free(nm: *mut GmdxNorming) {
    if !nm.is_null() {
        drop(Box::from_raw(nm));
    }
}

/// Reads the solved quantities; any out pointer may be null to skip it.
///
/// # Safety
/// `nm` must be a valid handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdx_norming_info(
    nm: *const GmdxNorming,
    n: *mut f64,
    b: *mut f64,
    b_pow_2k: *mut f64,
    t: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if !n.is_null() {
        *n = h.norming.n();
    }
    if !b.is_null() {
        *b = h.norming.b();
    }
    if !b_pow_2k.is_null() {
        *b_pow_2k = h.norming.b_pow_2k();
    }
    if !t.is_null() {
        *t = h.norming.t();
    }
    GmdxOk
}

/// Affine max level u(x, b_n).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_u_level(nm: *const GmdxNorming, x: f64, out: *mut f64) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, h.norming.u_level(&h.params, x))
}

/// Affine min level v(y, b_n) = -u(-y, b_n).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_v_level(nm: *const GmdxNorming, y: f64, out: *mut f64) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(y, "y") {
        return s;
    }
    write_value(out, h.norming.v_level(&h.params, y))
}

/// Gumbel distribution exp(-e^{-x}); total.
#[no_mangle]
pub extern "C" fn gmdx_gumbel(x: f64) -> f64 {
    expansions::gumbel(x)
}

/// Complementary error function; total.
#[no_mangle]
pub extern "C" fn gmdx_erfc(x: f64) -> f64 {
    gmd_extremes::specfun::erfc(x)
}

/// First-order max-law correction coefficient l(x).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_l_coeff(dist: *const GmdxDist, x: f64, out: *mut f64) -> GmdxStatus {
    let d = deref!(dist);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, expansions::l_k(&d.params, x))
}

/// Second-order max-law correction coefficient w(x).
///
/// # Safety
/// `dist` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_w_coeff(dist: *const GmdxDist, x: f64, out: *mut f64) -> GmdxStatus {
    let d = deref!(dist);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, expansions::w_k(&d.params, x))
}

/// Joint correction coefficients at (x, y); null out pointers are skipped.
///
/// # Safety
/// `dist` must be valid; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gmdx_joint_coeffs(
    dist: *const GmdxDist,
    x: f64,
    y: f64,
    l_joint: *mut f64,
    w_joint: *mut f64,
    c1: *mut f64,
    c2: *mut f64,
) -> GmdxStatus {
    let d = deref!(dist);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    let c = expansions::joint_coeffs(&d.params, x, y);
    if !l_joint.is_null() {
        *l_joint = c.l_joint;
    }
    if !w_joint.is_null() {
        *w_joint = c.w_joint;
    }
    if !c1.is_null() {
        *c1 = c.c1;
    }
    if !c2.is_null() {
        *c2 = c.c2;
    }
    GmdxOk
}

fn order_of(order: u32) -> Result<ApproxOrder, GmdxStatus> {
    ApproxOrder::from_index(order).map_err(|e| status_of(&e))
}

/// Order-1/2/3 approximant of P(M_n <= u(x, b_n)).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_approx_max_cdf(
    nm: *const GmdxNorming,
    x: f64,
    order: u32,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    match order_of(order) {
        Ok(ord) => write_value(
            out,
            expansions::approx_max_cdf(&h.params, &h.norming, x, ord),
        ),
        Err(s) => s,
    }
}

/// Order-1/2/3 approximant of P(m_n <= v(y, b_n)).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_approx_min_cdf(
    nm: *const GmdxNorming,
    y: f64,
    order: u32,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(y, "y") {
        return s;
    }
    match order_of(order) {
        Ok(ord) => write_value(
            out,
            expansions::approx_min_cdf(&h.params, &h.norming, y, ord),
        ),
        Err(s) => s,
    }
}

/// Order-1/2/3 approximant S_i of the joint cdf.
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_approx_joint_cdf(
    nm: *const GmdxNorming,
    x: f64,
    y: f64,
    order: u32,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    match order_of(order) {
        Ok(ord) => write_value(
            out,
            expansions::approx_joint_cdf(&h.params, &h.norming, x, y, ord),
        ),
        Err(s) => s,
    }
}

/// Order-1/2/3 approximant T_i of the joint density.
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_approx_joint_pdf(
    nm: *const GmdxNorming,
    x: f64,
    y: f64,
    order: u32,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    match order_of(order) {
        Ok(ord) => write_value(
            out,
            expansions::approx_joint_pdf(&h.params, &h.norming, x, y, ord),
        ),
        Err(s) => s,
    }
}

/// Exact P(M_n <= u(x, b_n)).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_exact_max_cdf(
    nm: *const GmdxNorming,
    x: f64,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(x, "x") {
        return s;
    }
    write_value(out, exact::exact_max_cdf(&h.params, &h.norming, x))
}

/// Exact P(m_n <= v(y, b_n)).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_exact_min_cdf(
    nm: *const GmdxNorming,
    y: f64,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if let Err(s) = finite_guard(y, "y") {
        return s;
    }
    write_value(out, exact::exact_min_cdf(&h.params, &h.norming, y))
}

/// Exact joint cdf of the normalized (max, min) pair.
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_exact_joint_cdf(
    nm: *const GmdxNorming,
    x: f64,
    y: f64,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    write_value(
        out,
        exact::exact_joint_cdf(&h.params, &h.norming, JointPoint::new(x, y)),
    )
}

/// Exact joint density of the normalized (max, min) pair.
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_exact_joint_pdf(
    nm: *const GmdxNorming,
    x: f64,
    y: f64,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    write_value(
        out,
        exact::exact_joint_pdf(&h.params, &h.norming, JointPoint::new(x, y)),
    )
}

/// Log-law functional h(x, y); requires u(x) > v(y).
///
/// # Safety
/// `nm` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn gmdx_h_functional(
    nm: *const GmdxNorming,
    x: f64,
    y: f64,
    out: *mut f64,
) -> GmdxStatus {
    let h = deref!(nm);
    if finite_guard(x, "x").is_err() || finite_guard(y, "y").is_err() {
        return GmdxDomainError;
    }
    match exact::h_k_functional(&h.params, &h.norming, JointPoint::new(x, y)) {
        Ok(v) => write_value(out, v),
        Err(e) => status_of(&e),
    }
}
