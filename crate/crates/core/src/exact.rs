//! Exact finite-n laws of the normalized (max, min) pair.
//!
//! Every n-th power of a cdf is computed as `exp(n · log1p(−tail))` on a
//! directly evaluated tail probability, never through a 1 − cdf
//! subtraction: at n = 1e12 the survival mass at the u level is about
//! e^{−x}/n and naive subtraction would destroy it.

use crate::error::{Error, Result};
use crate::gmd::GmdParams;
use crate::norming::Norming;

/// One point in the normalized (max, min) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPoint {
    pub x: f64,
    pub y: f64,
}

impl JointPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Tail pieces shared by the joint laws: sf(u(x)) and F(v(y)) = sf(u(−y)).
fn tails(p: &GmdParams, nm: &Norming, x: f64, y: f64) -> (f64, f64) {
    (p.sf(nm.u_level(p, x)), p.sf(nm.u_level(p, -y)))
}

/// P(M_n ≤ u(x, b_n)) = F(u)^n, computed as exp(n·log1p(−sf(u))).
pub fn exact_max_cdf(p: &GmdParams, nm: &Norming, x: f64) -> f64 {
    let sf_u = p.sf(nm.u_level(p, x));
    (nm.n() * (-sf_u).ln_1p()).exp()
}

/// P(m_n ≤ v(y, b_n)) = 1 − (1 − F(v))^n with F(v) taken from the mirrored
/// upper tail.
pub fn exact_min_cdf(p: &GmdParams, nm: &Norming, y: f64) -> f64 {
    let cdf_v = p.sf(nm.u_level(p, -y));
    -(nm.n() * (-cdf_v).ln_1p()).exp_m1()
}

/// P(M_n ≤ u(x), m_n ≤ v(y)) = F(u)^n − [F(u) − F(v)]^n for u > v, and the
/// marginal max law when v ≥ u (the min can never exceed the max).
pub fn exact_joint_cdf(p: &GmdParams, nm: &Norming, pt: JointPoint) -> f64 {
    let max_cdf = exact_max_cdf(p, nm, pt.x);
    if nm.u_level(p, pt.x) <= nm.v_level(p, pt.y) {
        return max_cdf;
    }
    let (sf_u, cdf_v) = tails(p, nm, pt.x, pt.y);
    let inner = sf_u + cdf_v; // 1 − (F(u) − F(v))
    if inner >= 1.0 {
        return max_cdf;
    }
    (max_cdf - (nm.n() * (-inner).ln_1p()).exp()).max(0.0)
}

/// Joint density of the normalized pair,
/// g_n(x,y) = (σ²/k)² b^{2−4k} n(n−1) [F(u)−F(v)]^{n−2} f(u) f(v) for u > v.
///
/// Grouped as (n·f(u))·(n·f(v))·(1 − 1/n)·…: n² alone overflows past
/// n ≈ 1e154, while each n·f factor stays bounded by n itself.
pub fn exact_joint_pdf(p: &GmdParams, nm: &Norming, pt: JointPoint) -> f64 {
    let u = nm.u_level(p, pt.x);
    let v = nm.v_level(p, pt.y);
    if u <= v {
        return 0.0;
    }
    let (sf_u, cdf_v) = tails(p, nm, pt.x, pt.y);
    let inner = sf_u + cdf_v;
    if inner >= 1.0 {
        return 0.0;
    }
    let n = nm.n();
    let slope = nm.level_slope(p); // σ² b^{1−2k} / k
    let power = ((n - 2.0) * (-inner).ln_1p()).exp();
    slope * slope * (n * p.pdf(u)) * (n * p.pdf(v)) * (1.0 - 1.0 / n) * power
}

/// The log-law functional h(x, y) = n·log[F(u) − F(v)] + e^{−x} + e^{y};
/// tends to 0 as n → ∞ at fixed (x, y). Requires u > v.
pub fn h_k_functional(p: &GmdParams, nm: &Norming, pt: JointPoint) -> Result<f64> {
    let u = nm.u_level(p, pt.x);
    let v = nm.v_level(p, pt.y);
    if u <= v {
        return Err(Error::Domain(format!(
            "h functional requires u(x) > v(y); got u={u}, v={v} at (x,y)=({}, {})",
            pt.x, pt.y
        )));
    }
    let (sf_u, cdf_v) = tails(p, nm, pt.x, pt.y);
    Ok(nm.n() * (-(sf_u + cdf_v)).ln_1p() + (-pt.x).exp() + pt.y.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norming::solve_norming;
    use crate::quad;
    use proptest::prelude::*;

    fn gmd(k: f64, sigma: f64) -> GmdParams {
        GmdParams::new(k, sigma).unwrap()
    }

    const E_INV: f64 = 0.36787944117144233;

    #[test]
    fn max_cdf_saturates_and_anchors() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e6).unwrap();
        assert!((exact_max_cdf(&p, &nm, 50.0) - 1.0).abs() < 1e-12);
        // At x = 0 the level is b itself: F(b)^n = (1 − 1/n)^n → e^{−1}.
        let at_zero = exact_max_cdf(&p, &nm, 0.0);
        assert!((at_zero - E_INV).abs() < 2e-7, "got {at_zero}");
        assert!(at_zero < E_INV); // (1 − 1/n)^n approaches from below
    }

    #[test]
    fn max_cdf_approaches_gumbel() {
        // The 1/log n rate puts the true gap at |l(1)|Λ(1)·b^{-2} ≈ 2.1e-3
        // for n = 1e12.
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e12).unwrap();
        let got = exact_max_cdf(&p, &nm, 1.0);
        let lam1 = 0.6922006275553464;
        assert!((got - lam1).abs() < 3e-3, "got {got}");
        let further = exact_max_cdf(&p, &solve_norming(&p, 1e24).unwrap(), 1.0);
        assert!((further - lam1).abs() < (got - lam1).abs());
    }

    #[test]
    fn min_cdf_anchors() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e6).unwrap();
        let at_zero = exact_min_cdf(&p, &nm, 0.0);
        assert!((at_zero - (1.0 - E_INV)).abs() < 2e-7);
        assert!(exact_min_cdf(&p, &nm, -50.0).abs() < 1e-12);
    }

    #[test]
    fn min_is_mirrored_max() {
        let p = gmd(1.5, 0.7);
        let nm = solve_norming(&p, 1e4).unwrap();
        for &y in &[-2.0, -0.5, 0.0, 1.0, 3.0] {
            let lhs = exact_min_cdf(&p, &nm, y);
            let rhs = 1.0 - exact_max_cdf(&p, &nm, -y);
            assert!((lhs - rhs).abs() < 1e-15, "y = {y}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn joint_cdf_collapses_when_v_exceeds_u() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e6).unwrap();
        let joint = exact_joint_cdf(&p, &nm, JointPoint::new(0.0, 50.0));
        assert_eq!(joint, exact_max_cdf(&p, &nm, 0.0));
        // And large x recovers the min marginal.
        let joint_x = exact_joint_cdf(&p, &nm, JointPoint::new(50.0, 0.3));
        assert!((joint_x - exact_min_cdf(&p, &nm, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn joint_cdf_approaches_product_limit() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e12).unwrap();
        let got = exact_joint_cdf(&p, &nm, JointPoint::new(0.0, 0.0));
        assert!((got - 0.2325442).abs() < 2e-2, "got {got}");
    }

    #[test]
    fn two_forms_of_the_joint_cdf_agree() {
        // Difference form F^n(u) − [F(u)−F(v)]^n recomputed naively with
        // powf at moderate n, where the naive route is still accurate.
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 100.0).unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.0, -1.0), (2.0, 1.5), (-0.5, -2.0)] {
            let u = nm.u_level(&p, x);
            let v = nm.v_level(&p, y);
            let naive = p.cdf(u).powf(nm.n()) - (p.cdf(u) - p.cdf(v)).powf(nm.n());
            let got = exact_joint_cdf(&p, &nm, JointPoint::new(x, y));
            assert!((got - naive).abs() <= 1e-14, "({x},{y}): {got} vs {naive}");
        }
    }

    #[test]
    fn joint_pdf_support_and_mass() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 100.0).unwrap();
        // u ≤ v regime has zero density.
        assert_eq!(exact_joint_pdf(&p, &nm, JointPoint::new(-3.0, 60.0)), 0.0);
        // Quadrature over a box equals the mixed second difference of the cdf.
        let h = |x: f64, y: f64| exact_joint_cdf(&p, &nm, JointPoint::new(x, y));
        let boxed = quad::integrate2d(
            |x, y| exact_joint_pdf(&p, &nm, JointPoint::new(x, y)),
            (0.0, 1.0),
            (-1.0, 0.0),
            4,
            4,
            16,
        );
        let mixed = h(1.0, 0.0) - h(0.0, 0.0) - h(1.0, -1.0) + h(0.0, -1.0);
        assert!(
            (boxed - mixed).abs() < 1e-8,
            "box integral {boxed} vs mixed difference {mixed}"
        );
    }

    #[test]
    fn joint_pdf_approaches_limit_density() {
        // Relative gap |C₁(0,0)| b^{-2} ≈ 3.5e-2 at n = 1e12, shrinking in n.
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e12).unwrap();
        let got = exact_joint_pdf(&p, &nm, JointPoint::new(0.0, 0.0));
        let g = (-2.0f64).exp();
        assert!((got - g).abs() < 4e-2 * g, "got {got}, limit {g}");
        let further = exact_joint_pdf(
            &p,
            &solve_norming(&p, 1e24).unwrap(),
            JointPoint::new(0.0, 0.0),
        );
        assert!((further - g).abs() < (got - g).abs());
    }

    #[test]
    fn h_functional_anchors() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 1e6).unwrap();
        // h(0,0) = n log(1 − 2/n) + 2 = −2/n + O(1/n²).
        let h = h_k_functional(&p, &nm, JointPoint::new(0.0, 0.0)).unwrap();
        assert!(h.abs() < 3e-6, "h = {h}");
        // |h| decreases along n at (1, 0).
        let mut prev = f64::INFINITY;
        for &n in &[1e4, 1e6, 1e8] {
            let nm = solve_norming(&p, n).unwrap();
            let h = h_k_functional(&p, &nm, JointPoint::new(1.0, 0.0))
                .unwrap()
                .abs();
            assert!(h < prev, "n={n:e}: |h| = {h} did not decrease");
            prev = h;
        }
        // u ≤ v → domain error (x far below y at small n).
        let small = solve_norming(&p, 10.0).unwrap();
        assert!(h_k_functional(&p, &small, JointPoint::new(-30.0, 30.0)).is_err());
    }

    #[test]
    fn no_nan_over_the_extended_box() {
        for &k in &[0.5, 1.0, 6.0] {
            let p = gmd(k, 1.0);
            for &n in &[1e2, 1e12, 1e300] {
                let nm = solve_norming(&p, n).unwrap();
                for &x in &[-40.0, -1.0, 0.0, 2.0, 40.0] {
                    for &y in &[-40.0, -1.0, 0.0, 2.0, 40.0] {
                        let pt = JointPoint::new(x, y);
                        let c = exact_joint_cdf(&p, &nm, pt);
                        let d = exact_joint_pdf(&p, &nm, pt);
                        assert!((0.0..=1.0).contains(&c), "cdf k={k} n={n:e} ({x},{y}): {c}");
                        assert!(
                            d >= 0.0 && d.is_finite(),
                            "pdf k={k} n={n:e} ({x},{y}): {d}"
                        );
                        assert!(
                            c <= exact_max_cdf(&p, &nm, x) + 1e-15,
                            "joint exceeds max marginal"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn full_plane_mass_is_one_at_n_100() {
        let p = gmd(1.0, 1.0);
        let nm = solve_norming(&p, 100.0).unwrap();
        let mass = quad::integrate2d(
            |x, y| exact_joint_pdf(&p, &nm, JointPoint::new(x, y)),
            (-8.0, 20.0),
            (-20.0, 8.0),
            28,
            28,
            16,
        );
        assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rectangle_mass_is_nonnegative(
            x1 in -3.0f64..3.0, dx in 0.01f64..3.0,
            y1 in -3.0f64..3.0, dy in 0.01f64..3.0,
            n_exp in 1.0f64..12.0,
        ) {
            let p = gmd(1.0, 1.0);
            let nm = solve_norming(&p, 10f64.powf(n_exp)).unwrap();
            let h = |x: f64, y: f64| exact_joint_cdf(&p, &nm, JointPoint::new(x, y));
            let mass = h(x1 + dx, y1 + dy) - h(x1, y1 + dy) - h(x1 + dx, y1) + h(x1, y1);
            prop_assert!(mass >= -1e-12, "negative rectangle mass {mass}");
        }

        #[test]
        fn joint_cdf_monotone_in_each_coordinate(
            x in -3.0f64..3.0, y in -3.0f64..3.0, d in 0.0f64..2.0,
        ) {
            let p = gmd(1.5, 1.0);
            let nm = solve_norming(&p, 1e4).unwrap();
            let base = exact_joint_cdf(&p, &nm, JointPoint::new(x, y));
            prop_assert!(exact_joint_cdf(&p, &nm, JointPoint::new(x + d, y)) >= base - 1e-13);
            prop_assert!(exact_joint_cdf(&p, &nm, JointPoint::new(x, y + d)) >= base - 1e-13);
        }
    }
}
