//! The experimental engine: error tables, Richardson-extrapolated limit
//! probes, convergence-rate fits, and Monte Carlo validation.
//!
//! Probe design: every probe evaluates its n-functional through the
//! gmd/norming/exact modules only (the weak limits Λ(x), 1 − Λ(−y) and the
//! limit density are inlined here), while the targets come from the
//! expansions module. A bug on either side breaks the gap check, so the two
//! sides act as mutual oracles.

use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, JointPoint};
use crate::expansions::{self, ApproxOrder};
use crate::gmd::GmdParams;
use crate::norming::{solve_norming, Norming};

/// One grid point of the error table: exact values, the three approximants,
/// and their absolute errors on both the cdf and the density side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRecord {
    pub k: f64,
    pub sigma: f64,
    pub n: f64,
    pub x: f64,
    pub y: f64,
    pub b: f64,
    pub exact_cdf: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub exact_pdf: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

/// Builds one [`ErrorRecord`] per (n, x, y) triple, n outermost.
pub fn error_table(
    p: &GmdParams,
    n_list: &[f64],
    x_grid: &[f64],
    y_grid: &[f64],
) -> Result<Vec<ErrorRecord>> {
    let mut records = Vec::with_capacity(n_list.len() * x_grid.len() * y_grid.len());
    for &n in n_list {
        let nm = solve_norming(p, n)?;
        for &x in x_grid {
            for &y in y_grid {
                records.push(error_record(p, &nm, x, y));
            }
        }
    }
    Ok(records)
}

fn error_record(p: &GmdParams, nm: &Norming, x: f64, y: f64) -> ErrorRecord {
    let pt = JointPoint::new(x, y);
    let exact_cdf = exact::exact_joint_cdf(p, nm, pt);
    let exact_pdf = exact::exact_joint_pdf(p, nm, pt);
    let s1 = expansions::approx_joint_cdf(p, nm, x, y, ApproxOrder::First);
    let s2 = expansions::approx_joint_cdf(p, nm, x, y, ApproxOrder::Second);
    let s3 = expansions::approx_joint_cdf(p, nm, x, y, ApproxOrder::Third);
    let t1 = expansions::approx_joint_pdf(p, nm, x, y, ApproxOrder::First);
    let t2 = expansions::approx_joint_pdf(p, nm, x, y, ApproxOrder::Second);
    let t3 = expansions::approx_joint_pdf(p, nm, x, y, ApproxOrder::Third);
    ErrorRecord {
        k: p.k(),
        sigma: p.sigma(),
        n: nm.n(),
        x,
        y,
        b: nm.b(),
        exact_cdf,
        s1,
        s2,
        s3,
        delta1: (exact_cdf - s1).abs(),
        delta2: (exact_cdf - s2).abs(),
        delta3: (exact_cdf - s3).abs(),
        exact_pdf,
        t1,
        t2,
        t3,
        theta1: (exact_pdf - t1).abs(),
        theta2: (exact_pdf - t2).abs(),
        theta3: (exact_pdf - t3).abs(),
    }
}

/// The probe catalog. Each probe has a first- and a second-stage limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeId {
    /// Max log-law: b^{2k}[n log F(u) + e^{-x}] → l(x), next stage → w(x).
    Lemma42,
    /// Joint log-law: b^{2k} h(x,y) → l(x,y), next stage → w(x,y).
    Lemma43,
    /// Min-cdf expansion: b^{2k}[P(m ≤ v) − (1−Λ(−y))] → −l(−y)Λ(−y), ...
    Prop21,
    /// Joint-cdf expansion: stages recover the order-2 and order-3 terms.
    Thm22,
    /// Joint-density ratio: b^{2k}[g_n/g − 1] → C₁, next stage → C₂.
    Thm23,
    /// Density ratio at the u level: stages → the two x-side coefficients.
    Eq415,
    /// Density ratio at the v level: stages → the two y-side coefficients.
    Eq416,
}

impl ProbeId {
    pub const ALL: [ProbeId; 7] = [
        ProbeId::Lemma42,
        ProbeId::Lemma43,
        ProbeId::Prop21,
        ProbeId::Thm22,
        ProbeId::Thm23,
        ProbeId::Eq415,
        ProbeId::Eq416,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProbeId::Lemma42 => "lemma42",
            ProbeId::Lemma43 => "lemma43",
            ProbeId::Prop21 => "prop21",
            ProbeId::Thm22 => "thm22",
            ProbeId::Thm23 => "thm23",
            ProbeId::Eq415 => "eq415",
            ProbeId::Eq416 => "eq416",
        }
    }
}

impl FromStr for ProbeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma42" => Ok(ProbeId::Lemma42),
            "lemma43" => Ok(ProbeId::Lemma43),
            "prop21" => Ok(ProbeId::Prop21),
            "thm22" => Ok(ProbeId::Thm22),
            "thm23" => Ok(ProbeId::Thm23),
            "eq415" => Ok(ProbeId::Eq415),
            "eq416" => Ok(ProbeId::Eq416),
            other => Err(Error::Usage(format!(
                "unknown probe id '{other}' (expected one of lemma42, lemma43, prop21, thm22, thm23, eq415, eq416)"
            ))),
        }
    }
}

/// One extrapolation stage of a probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeStage {
    /// Functional evaluations, one per grid entry.
    pub values: Vec<f64>,
    /// Richardson limit of `values` in t = b^{-2k}.
    pub extrapolated: f64,
    /// Closed-form limit from the expansions module.
    pub target: f64,
    pub abs_gap: f64,
}

/// A named limit functional evaluated on an n-sequence, with both of its
/// extrapolated stages and their closed-form targets.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub id: ProbeId,
    pub k: f64,
    pub sigma: f64,
    pub x: f64,
    pub y: f64,
    pub n_grid: Vec<f64>,
    /// b_n^{-2k} per grid entry; strictly decreasing.
    pub t_grid: Vec<f64>,
    pub stage1: ProbeStage,
    pub stage2: ProbeStage,
}

/// Λ(x) = exp(-e^{-x}), inlined so the probe side never touches expansions.
fn gumbel_inline(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// The raw n-functional Φ(n) of a probe; Φ = τ·(γ₁ + γ₂τ + O(τ²)).
fn probe_functional(id: ProbeId, p: &GmdParams, nm: &Norming, pt: JointPoint) -> Result<f64> {
    let (x, y) = (pt.x, pt.y);
    match id {
        ProbeId::Lemma42 => {
            let sf_u = p.sf(nm.u_level(p, x));
            Ok(nm.n() * (-sf_u).ln_1p() + (-x).exp())
        }
        ProbeId::Lemma43 => exact::h_k_functional(p, nm, pt),
        ProbeId::Prop21 => {
            let limit = -(-(y.exp())).exp_m1(); // 1 − Λ(−y)
            Ok(exact::exact_min_cdf(p, nm, y) - limit)
        }
        ProbeId::Thm22 => {
            let limit = gumbel_inline(x) * -(-(y.exp())).exp_m1();
            Ok(exact::exact_joint_cdf(p, nm, pt) - limit)
        }
        ProbeId::Thm23 => {
            // Limit density g(x,y) = Λ(x)Λ(−y)e^{−x+y} as one exponential.
            let g = (-(-x).exp() - x + y - y.exp()).exp();
            Ok(exact::exact_joint_pdf(p, nm, pt) / g - 1.0)
        }
        ProbeId::Eq415 => {
            let sig2 = p.sigma() * p.sigma();
            let u = nm.u_level(p, x);
            let ratio = sig2 / p.k() * nm.n() * p.pdf(u) * x.exp() * nm.b() / nm.b_pow_2k();
            Ok(ratio - 1.0)
        }
        ProbeId::Eq416 => {
            let sig2 = p.sigma() * p.sigma();
            let v = nm.v_level(p, y);
            let ratio = sig2 / p.k() * nm.n() * p.pdf(v) * (-y).exp() * nm.b() / nm.b_pow_2k();
            Ok(ratio - 1.0)
        }
    }
}

/// Closed-form stage targets (γ₁, γ₂) for a probe, from the expansions side.
fn probe_targets(id: ProbeId, p: &GmdParams, pt: JointPoint) -> (f64, f64) {
    let (x, y) = (pt.x, pt.y);
    match id {
        ProbeId::Lemma42 => (expansions::l_k(p, x), expansions::w_k(p, x)),
        ProbeId::Lemma43 => {
            let c = expansions::joint_coeffs(p, x, y);
            (c.l_joint, c.w_joint)
        }
        ProbeId::Prop21 => {
            let lam = expansions::gumbel(-y);
            let l = expansions::l_k(p, -y);
            let w = expansions::w_k(p, -y);
            (-l * lam, -(w + 0.5 * l * l) * lam)
        }
        ProbeId::Thm22 => {
            let c = expansions::joint_coeffs(p, x, y);
            let lam_x = expansions::gumbel(x);
            let lam_my = expansions::gumbel(-y);
            (
                c.l_x * lam_x - c.l_joint * lam_x * lam_my,
                (c.w_x + 0.5 * c.l_x * c.l_x) * lam_x
                    - (c.w_joint + 0.5 * c.l_joint * c.l_joint) * lam_x * lam_my,
            )
        }
        ProbeId::Thm23 => {
            let c = expansions::joint_coeffs(p, x, y);
            (c.c1, c.c2)
        }
        ProbeId::Eq415 => expansions::u_density_coeffs(p, x),
        ProbeId::Eq416 => expansions::v_density_coeffs(p, y),
    }
}

/// Evaluates the probe on the grid, Richardson-extrapolates both stages in
/// t = b^{-2k}, and reports the gaps to the closed-form targets.
pub fn limit_probe(
    id: ProbeId,
    p: &GmdParams,
    pt: JointPoint,
    n_grid: &[f64],
) -> Result<ProbeResult> {
    if n_grid.len() < 3 {
        return Err(Error::Domain(format!(
            "probe n_grid needs at least 3 points, got {}",
            n_grid.len()
        )));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(
            "probe n_grid must be strictly increasing".into(),
        ));
    }
    let mut t_grid = Vec::with_capacity(n_grid.len());
    let mut phi = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let nm = solve_norming(p, n)?;
        t_grid.push(nm.tau());
        phi.push(probe_functional(id, p, &nm, pt)?);
    }
    let (target1, target2) = probe_targets(id, p, pt);
    let values1: Vec<f64> = phi.iter().zip(&t_grid).map(|(f, t)| f / t).collect();
    let extrapolated1 = richardson_extrapolate(&t_grid, &values1)?;
    let values2: Vec<f64> = values1
        .iter()
        .zip(&t_grid)
        .map(|(v, t)| (v - target1) / t)
        .collect();
    let extrapolated2 = richardson_extrapolate(&t_grid, &values2)?;
    Ok(ProbeResult {
        id,
        k: p.k(),
        sigma: p.sigma(),
        x: pt.x,
        y: pt.y,
        n_grid: n_grid.to_vec(),
        t_grid,
        stage1: ProbeStage {
            values: values1,
            extrapolated: extrapolated1,
            target: target1,
            abs_gap: (extrapolated1 - target1).abs(),
        },
        stage2: ProbeStage {
            values: values2,
            extrapolated: extrapolated2,
            target: target2,
            abs_gap: (extrapolated2 - target2).abs(),
        },
    })
}

/// Polynomial extrapolation of `values(t)` to t = 0 (Neville's scheme over
/// all supplied points: linear for 2, quadratic for 3, and so on).
///
/// ```
/// use gmd_extremes::lab::richardson_extrapolate;
///
/// let t = [0.4, 0.2, 0.1];
/// let v: Vec<f64> = t.iter().map(|&t| 3.0 + t + t * t).collect();
/// let limit = richardson_extrapolate(&t, &v).unwrap();
/// assert!((limit - 3.0).abs() < 1e-12);
/// ```
pub fn richardson_extrapolate(t_grid: &[f64], values: &[f64]) -> Result<f64> {
    if t_grid.len() != values.len() {
        return Err(Error::Domain(format!(
            "grid/value length mismatch: {} vs {}",
            t_grid.len(),
            values.len()
        )));
    }
    if t_grid.len() < 2 {
        return Err(Error::Domain(
            "extrapolation needs at least 2 points".into(),
        ));
    }
    if t_grid.iter().any(|t| !t.is_finite() || *t <= 0.0) || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(
            "extrapolation inputs must be finite with t > 0".into(),
        ));
    }
    if t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "t grid must be strictly decreasing toward 0 (duplicates not allowed)".into(),
        ));
    }
    let n = values.len();
    let mut tableau = values.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let t_lo = t_grid[i];
            let t_hi = t_grid[i + level];
            tableau[i] = (t_lo * tableau[i + 1] - t_hi * tableau[i]) / (t_lo - t_hi);
        }
    }
    Ok(tableau[0])
}

/// Which family of absolute errors a rate fit measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorSide {
    /// Δ_i: joint cdf vs S_i.
    Cdf,
    /// Θ_i: joint density vs T_i.
    Pdf,
}

impl FromStr for ErrorSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cdf" => Ok(ErrorSide::Cdf),
            "pdf" => Ok(ErrorSide::Pdf),
            other => Err(Error::Usage(format!(
                "unknown error side '{other}' (expected cdf or pdf)"
            ))),
        }
    }
}

/// Least-squares slope of log error against log b^{-2k}; approximately the
/// truncation order when the leading coefficient is nonzero at `pt`.
pub fn rate_fit(
    p: &GmdParams,
    pt: JointPoint,
    side: ErrorSide,
    ord: ApproxOrder,
    n_grid: &[f64],
) -> Result<f64> {
    if n_grid.len() < 2 {
        return Err(Error::Domain(
            "rate fit needs at least 2 grid points".into(),
        ));
    }
    let mut log_t = Vec::with_capacity(n_grid.len());
    let mut log_err = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let nm = solve_norming(p, n)?;
        let err = match side {
            ErrorSide::Cdf => {
                let exact = exact::exact_joint_cdf(p, &nm, pt);
                (exact - expansions::approx_joint_cdf(p, &nm, pt.x, pt.y, ord)).abs()
            }
            ErrorSide::Pdf => {
                let exact = exact::exact_joint_pdf(p, &nm, pt);
                (exact - expansions::approx_joint_pdf(p, &nm, pt.x, pt.y, ord)).abs()
            }
        };
        if err == 0.0 || !err.is_finite() {
            return Err(Error::Numeric(format!(
                "rate fit has a zero or non-finite error at n={n:e} (possible coefficient zero at ({}, {}))",
                pt.x, pt.y
            )));
        }
        log_t.push(nm.tau().ln());
        log_err.push(err.ln());
    }
    let m = log_t.len() as f64;
    let mean_t = log_t.iter().sum::<f64>() / m;
    let mean_e = log_err.iter().sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (lt, le) in log_t.iter().zip(&log_err) {
        num += (lt - mean_t) * (le - mean_e);
        den += (lt - mean_t) * (lt - mean_t);
    }
    Ok(num / den)
}

/// Monte Carlo block-extremes summary on a grid of joint points.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub n: u64,
    pub reps: u64,
    pub seed: u64,
    pub points: Vec<McPoint>,
    pub max_abs_dev: f64,
    /// 4·max over the grid of sqrt(p(1−p)/reps) with p the exact cdf.
    pub se_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPoint {
    pub x: f64,
    pub y: f64,
    pub empirical: f64,
    pub exact: f64,
    pub abs_dev: f64,
    pub se_bound: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-task RNG seed derived from (seed, task index); results are
/// order-independent reductions, so thread count never changes the output.
fn derive_seed(seed: u64, idx: u64) -> u64 {
    splitmix64(seed ^ splitmix64(idx.wrapping_add(0x1234_5678_9ABC_DEF0)))
}

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// Lab thread pool; GMD_EXTREMES_THREADS (positive integer) caps its size.
fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let threads = std::env::var("GMD_EXTREMES_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("lab thread pool")
    })
}

/// Draws `reps` blocks of `n` variates and compares the empirical frequency
/// of {M ≤ u(x), m ≤ v(y)} with the exact joint cdf at each grid point.
/// Deterministic given the seed, independent of the thread count.
pub fn mc_block_extremes(
    p: &GmdParams,
    n: u64,
    reps: u64,
    seed: u64,
    grid: &[JointPoint],
) -> Result<McSummary> {
    if grid.is_empty() {
        return Err(Error::Usage("Monte Carlo grid must be nonempty".into()));
    }
    if reps == 0 {
        return Err(Error::Usage("Monte Carlo needs reps >= 1".into()));
    }
    let budget = (n as u128) * (reps as u128);
    if budget > 1_000_000_000 {
        return Err(Error::Usage(format!(
            "n·reps = {budget} exceeds the 1e9 draw budget"
        )));
    }
    let nm = solve_norming(p, n as f64)?;
    let levels: Vec<(f64, f64)> = grid
        .iter()
        .map(|pt| (nm.u_level(p, pt.x), nm.v_level(p, pt.y)))
        .collect();
    let gamma = rand_distr::Gamma::new(p.gamma_shape(), 1.0).expect("shape a > 1");

    let counts = pool().install(|| {
        (0..reps)
            .into_par_iter()
            .fold(
                || vec![0u64; grid.len()],
                |mut acc, rep| {
                    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, rep));
                    let mut block_max = f64::NEG_INFINITY;
                    let mut block_min = f64::INFINITY;
                    for _ in 0..n {
                        let draw = p.sample_one(&gamma, &mut rng);
                        block_max = block_max.max(draw);
                        block_min = block_min.min(draw);
                    }
                    for (slot, (u, v)) in acc.iter_mut().zip(&levels) {
                        if block_max <= *u && block_min <= *v {
                            *slot += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; grid.len()],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        *x += *y;
                    }
                    a
                },
            )
    });

    let mut points = Vec::with_capacity(grid.len());
    let mut max_abs_dev: f64 = 0.0;
    let mut se_bound: f64 = 0.0;
    for (pt, count) in grid.iter().zip(&counts) {
        let empirical = *count as f64 / reps as f64;
        let exact = exact::exact_joint_cdf(p, &nm, *pt);
        let abs_dev = (empirical - exact).abs();
        let se = 4.0 * (exact * (1.0 - exact) / reps as f64).sqrt();
        max_abs_dev = max_abs_dev.max(abs_dev);
        se_bound = se_bound.max(se);
        points.push(McPoint {
            x: pt.x,
            y: pt.y,
            empirical,
            exact,
            abs_dev,
            se_bound: se,
        });
    }
    Ok(McSummary {
        n,
        reps,
        seed,
        points,
        max_abs_dev,
        se_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gmd(k: f64, sigma: f64) -> GmdParams {
        GmdParams::new(k, sigma).unwrap()
    }

    const DEFAULT_GRID: [f64; 3] = [1e6, 1e12, 1e24];

    #[test]
    fn richardson_reproduces_polynomials() {
        // Linear data: exact intercept.
        let t = [0.4, 0.2, 0.1];
        let lin: Vec<f64> = t.iter().map(|&t| 7.0 - 3.0 * t).collect();
        assert!((richardson_extrapolate(&t, &lin).unwrap() - 7.0).abs() < 1e-14);
        // Quadratic data: 3 + t + t².
        let quad: Vec<f64> = t.iter().map(|&t| 3.0 + t + t * t).collect();
        assert!((richardson_extrapolate(&t, &quad).unwrap() - 3.0).abs() < 1e-12);
        // Constant sequence.
        let konst = [5.5, 5.5, 5.5];
        assert_eq!(richardson_extrapolate(&t, &konst).unwrap(), 5.5);
        // Two points: linear fit.
        assert!((richardson_extrapolate(&[0.2, 0.1], &[1.2, 1.1]).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn richardson_rejects_bad_grids() {
        assert!(richardson_extrapolate(&[0.2, 0.2, 0.1], &[1.0, 2.0, 3.0]).is_err());
        assert!(richardson_extrapolate(&[0.1, 0.2], &[1.0, 2.0]).is_err());
        assert!(richardson_extrapolate(&[0.2], &[1.0]).is_err());
        assert!(richardson_extrapolate(&[0.2, 0.1], &[1.0]).is_err());
        assert!(richardson_extrapolate(&[0.2, -0.1], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn probe_ids_round_trip_and_reject_unknown() {
        for id in ProbeId::ALL {
            assert_eq!(ProbeId::from_str(id.as_str()).unwrap(), id);
        }
        assert!(matches!(ProbeId::from_str("nope"), Err(Error::Usage(_))));
    }

    #[test]
    fn probe_rejects_bad_grid() {
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(1.0, 0.0);
        assert!(limit_probe(ProbeId::Lemma42, &p, pt, &[1e6, 1e12]).is_err());
        assert!(limit_probe(ProbeId::Lemma42, &p, pt, &[1e12, 1e6, 1e24]).is_err());
    }

    #[test]
    fn lemma42_probe_recovers_both_coefficients() {
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(1.0, 0.0);
        let r = limit_probe(ProbeId::Lemma42, &p, pt, &DEFAULT_GRID).unwrap();
        assert!((r.stage1.target + 0.1839397).abs() < 1e-7);
        assert!(r.stage1.abs_gap < 0.01, "stage1 gap {}", r.stage1.abs_gap);
        assert!((r.stage2.target - 0.8737137).abs() < 1e-7);
        assert!(
            r.stage2.abs_gap < 0.10 * r.stage2.target.abs(),
            "stage2 gap {} target {}",
            r.stage2.abs_gap,
            r.stage2.target
        );
        assert!(r.t_grid.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn thm23_probe_off_origin_confirms_c2() {
        // Off the origin the disputed cubic/quadratic coefficient pieces
        // contribute, so this pins the corrected C₂ assembly.
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(1.0, 0.0);
        let r = limit_probe(ProbeId::Thm23, &p, pt, &DEFAULT_GRID).unwrap();
        assert!(r.stage1.abs_gap < 0.02, "C1 gap {}", r.stage1.abs_gap);
        assert!(
            r.stage2.abs_gap < 0.10 * r.stage2.target.abs().max(0.5),
            "C2 gap {} target {}",
            r.stage2.abs_gap,
            r.stage2.target
        );
    }

    #[test]
    fn third_order_errors_scale_as_tau_cubed() {
        // With the corrected second-order coefficients, the third-order
        // truncation errors shrink like τ³ (ratio ≈ (τ'/τ)³ between grids).
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(1.0, 0.0);
        let nm_a = solve_norming(&p, 1e8).unwrap();
        let nm_b = solve_norming(&p, 1e16).unwrap();
        let tau_ratio = nm_b.tau() / nm_a.tau();
        for side in [ErrorSide::Cdf, ErrorSide::Pdf] {
            let err = |nm: &Norming| match side {
                ErrorSide::Cdf => (exact::exact_joint_cdf(&p, nm, pt)
                    - expansions::approx_joint_cdf(&p, nm, pt.x, pt.y, ApproxOrder::Third))
                .abs(),
                ErrorSide::Pdf => (exact::exact_joint_pdf(&p, nm, pt)
                    - expansions::approx_joint_pdf(&p, nm, pt.x, pt.y, ApproxOrder::Third))
                .abs(),
            };
            let observed = err(&nm_b) / err(&nm_a);
            let predicted = tau_ratio.powi(3);
            assert!(
                (observed / predicted - 1.0).abs() < 0.35,
                "{side:?}: ratio {observed} vs τ³ {predicted}"
            );
        }
    }

    #[test]
    fn thm23_probe_arbitrates_the_density_coefficients() {
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(0.0, 0.0);
        let r = limit_probe(ProbeId::Thm23, &p, pt, &DEFAULT_GRID).unwrap();
        assert_eq!(r.stage1.target, -2.0);
        assert_eq!(r.stage2.target, 5.0);
        assert!(r.stage1.abs_gap < 0.05, "C1 gap {}", r.stage1.abs_gap);
        assert!(r.stage2.abs_gap < 0.15 * 5.0, "C2 gap {}", r.stage2.abs_gap);
    }

    #[test]
    fn y_side_probes_off_zero() {
        // The min-side cubic coefficients only show up for y ≠ 0: at
        // k = 1, σ = 1 the v-level stage-2 target is 1/8 + 1 + 3/2 + 2 + 2.
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(0.0, 1.0);
        let r = limit_probe(ProbeId::Eq416, &p, pt, &DEFAULT_GRID).unwrap();
        assert!((r.stage2.target - 6.625).abs() < 1e-12);
        assert!(r.stage1.abs_gap < 0.01, "stage1 gap {}", r.stage1.abs_gap);
        assert!(
            r.stage2.abs_gap < 0.10 * r.stage2.target,
            "stage2 gap {}",
            r.stage2.abs_gap
        );
        // Joint log-law with both coordinates active: w(1) + w(-1)
        // = (57/24)e^{-1} - (63/24)e.
        let joint = JointPoint::new(1.0, 1.0);
        let r = limit_probe(ProbeId::Lemma43, &p, joint, &DEFAULT_GRID).unwrap();
        let want = 57.0 / 24.0 * (-1.0f64).exp() - 63.0 / 24.0 * std::f64::consts::E;
        assert!((r.stage2.target - want).abs() < 1e-12);
        assert!(
            r.stage2.abs_gap < 0.10 * r.stage2.target.abs(),
            "stage2 gap {} target {}",
            r.stage2.abs_gap,
            r.stage2.target
        );
        // Full joint-density coefficients at an asymmetric point.
        let r = limit_probe(ProbeId::Thm23, &p, JointPoint::new(1.0, 0.5), &DEFAULT_GRID).unwrap();
        assert!(r.stage1.abs_gap < 0.02, "C1 gap {}", r.stage1.abs_gap);
        assert!(
            r.stage2.abs_gap < 0.10 * r.stage2.target.abs().max(0.5),
            "C2 gap {} target {}",
            r.stage2.abs_gap,
            r.stage2.target
        );
    }

    #[test]
    fn probes_hold_away_from_unit_scale() {
        // σ enters the coefficients as σ² and σ⁴; a wrong power would blow
        // these gaps up immediately.
        for &(k, sigma) in &[(1.0, 2.0), (1.5, 0.5), (6.0, 2.0)] {
            let p = gmd(k, sigma);
            let pt = JointPoint::new(1.0, 0.5);
            for id in [
                ProbeId::Lemma42,
                ProbeId::Lemma43,
                ProbeId::Thm23,
                ProbeId::Eq415,
            ] {
                let r = limit_probe(id, &p, pt, &DEFAULT_GRID).unwrap();
                let tol1 = (0.02 * r.stage1.target.abs()).max(0.05);
                let tol2 = (0.12 * r.stage2.target.abs()).max(0.05);
                assert!(
                    r.stage1.abs_gap <= tol1,
                    "{id:?} k={k} sigma={sigma} stage1: gap {} target {}",
                    r.stage1.abs_gap,
                    r.stage1.target
                );
                assert!(
                    r.stage2.abs_gap <= tol2,
                    "{id:?} k={k} sigma={sigma} stage2: gap {} target {}",
                    r.stage2.abs_gap,
                    r.stage2.target
                );
            }
        }
    }

    #[test]
    fn rate_fit_reports_degenerate_errors() {
        let p = gmd(1.0, 1.0);
        // Far above the support boundary both the density and its
        // approximants are exactly zero, so the fit has nothing to regress.
        let degenerate = JointPoint::new(0.0, 1e6);
        assert!(matches!(
            rate_fit(
                &p,
                degenerate,
                ErrorSide::Pdf,
                ApproxOrder::First,
                &[1e6, 1e8]
            ),
            Err(Error::Numeric(_))
        ));
        // Domain errors from the n grid propagate.
        assert!(matches!(
            rate_fit(
                &p,
                JointPoint::new(1.0, 0.0),
                ErrorSide::Cdf,
                ApproxOrder::First,
                &[2.0, 1e6]
            ),
            Err(Error::Domain(_))
        ));
        assert!(rate_fit(
            &p,
            JointPoint::new(1.0, 0.0),
            ErrorSide::Cdf,
            ApproxOrder::First,
            &[1e6]
        )
        .is_err());
    }

    #[test]
    fn error_table_propagates_domain_errors() {
        let p = gmd(1.0, 1.0);
        assert!(matches!(
            error_table(&p, &[2.0], &[0.0], &[0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn every_probe_gap_shrinks_on_an_upshifted_grid() {
        let p = gmd(1.0, 1.0);
        let pt = JointPoint::new(1.0, 0.0);
        let upshifted: Vec<f64> = DEFAULT_GRID.iter().map(|n| n * 1e6).collect();
        for id in ProbeId::ALL {
            let lo = limit_probe(id, &p, pt, &DEFAULT_GRID).unwrap();
            let hi = limit_probe(id, &p, pt, &upshifted).unwrap();
            for (stage_lo, stage_hi, name) in [
                (&lo.stage1, &hi.stage1, "stage1"),
                (&lo.stage2, &hi.stage2, "stage2"),
            ] {
                assert!(
                    stage_hi.abs_gap < stage_lo.abs_gap || stage_hi.abs_gap < 1e-6,
                    "{id:?} {name}: gap {} did not shrink from {}",
                    stage_hi.abs_gap,
                    stage_lo.abs_gap
                );
            }
        }
    }

    #[test]
    fn error_table_single_point_consistency() {
        let p = gmd(1.0, 1.0);
        let rows = error_table(&p, &[500.0], &[2.0], &[6.0]).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.n, 500.0);
        assert_eq!((r.x, r.y), (2.0, 6.0));
        assert_eq!(r.delta1, (r.exact_cdf - r.s1).abs());
        assert_eq!(r.delta2, (r.exact_cdf - r.s2).abs());
        assert_eq!(r.delta3, (r.exact_cdf - r.s3).abs());
        assert_eq!(r.theta1, (r.exact_pdf - r.t1).abs());
        assert_eq!(r.theta2, (r.exact_pdf - r.t2).abs());
        assert_eq!(r.theta3, (r.exact_pdf - r.t3).abs());
        // Determinism: a rerun is bit-identical.
        let again = error_table(&p, &[500.0], &[2.0], &[6.0]).unwrap();
        assert_eq!(rows, again);
    }

    #[test]
    fn error_table_first_order_error_vanishes_in_the_limit() {
        // Convergence is O(1/log n), so even at the n cap the first-order
        // error is only ~1e-4 scale.
        let p = gmd(1.0, 1.0);
        let mut prev = f64::INFINITY;
        for &n in &[1e4, 1e12, 1e100, 1e300] {
            let r = &error_table(&p, &[n], &[1.0], &[0.0]).unwrap()[0];
            assert!(r.delta1 < prev, "delta1 not decreasing at n={n:e}");
            prev = r.delta1;
        }
        assert!(prev < 1e-4, "delta1 at the n cap: {prev}");
    }

    #[test]
    fn error_table_higher_order_beats_first_order() {
        let p = gmd(1.0, 1.0);
        let r = &error_table(&p, &[1e8], &[1.0], &[0.0]).unwrap()[0];
        assert!(
            r.delta3 <= r.delta1,
            "delta3 {} > delta1 {}",
            r.delta3,
            r.delta1
        );
    }

    #[test]
    fn rate_fit_slopes_match_orders() {
        let p = gmd(1.0, 1.0);
        let grid = [1e6, 1e12, 1e24, 1e48];
        let pt = JointPoint::new(1.0, 0.0);
        let s1 = rate_fit(&p, pt, ErrorSide::Cdf, ApproxOrder::First, &grid).unwrap();
        assert!((s1 - 1.0).abs() < 0.15, "Δ1 slope {s1}");
        let s2 = rate_fit(&p, pt, ErrorSide::Cdf, ApproxOrder::Second, &grid).unwrap();
        assert!((s2 - 2.0).abs() < 0.25, "Δ2 slope {s2}");
        let origin = JointPoint::new(0.0, 0.0);
        let t1 = rate_fit(&p, origin, ErrorSide::Pdf, ApproxOrder::First, &grid).unwrap();
        assert!((t1 - 1.0).abs() < 0.15, "Θ1 slope {t1}");
    }

    #[test]
    fn mc_matches_exact_within_binomial_error() {
        let p = gmd(1.0, 1.0);
        let grid = [
            JointPoint::new(-1.0, 0.0),
            JointPoint::new(0.0, 0.0),
            JointPoint::new(1.0, 1.0),
        ];
        let s = mc_block_extremes(&p, 50, 20_000, 4242, &grid).unwrap();
        for pt in &s.points {
            assert!(
                pt.abs_dev <= pt.se_bound,
                "({}, {}): dev {} > bound {}",
                pt.x,
                pt.y,
                pt.abs_dev,
                pt.se_bound
            );
        }
        assert!(s.max_abs_dev <= s.se_bound);
    }

    #[test]
    fn mc_is_deterministic() {
        let p = gmd(1.5, 1.0);
        let grid = [JointPoint::new(0.0, 0.0)];
        let a = mc_block_extremes(&p, 25, 4_000, 99, &grid).unwrap();
        let b = mc_block_extremes(&p, 25, 4_000, 99, &grid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mc_large_y_coincides_with_the_marginal_event() {
        let p = gmd(1.0, 1.0);
        let grid = [JointPoint::new(0.5, 50.0), JointPoint::new(0.5, 60.0)];
        let s = mc_block_extremes(&p, 50, 5_000, 7, &grid).unwrap();
        assert_eq!(s.points[0].empirical, s.points[1].empirical);
        let nm = solve_norming(&p, 50.0).unwrap();
        assert_eq!(s.points[0].exact, exact::exact_max_cdf(&p, &nm, 0.5));
    }

    #[test]
    fn mc_deviation_shrinks_with_more_reps() {
        let p = gmd(1.0, 1.0);
        let grid = [JointPoint::new(0.0, 0.0)];
        let small = mc_block_extremes(&p, 25, 10_000, 31, &grid).unwrap();
        let large = mc_block_extremes(&p, 25, 40_000, 31, &grid).unwrap();
        // √reps scaling, tested as a loose trend.
        assert!(
            large.max_abs_dev <= small.max_abs_dev * 1.25 + 1e-12,
            "dev {} vs {}",
            large.max_abs_dev,
            small.max_abs_dev
        );
    }

    #[test]
    fn mc_guards_budget_and_usage() {
        let p = gmd(1.0, 1.0);
        let grid = [JointPoint::new(0.0, 0.0)];
        assert!(matches!(
            mc_block_extremes(&p, 100_000, 100_000, 1, &grid),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            mc_block_extremes(&p, 100, 100, 1, &[]),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            mc_block_extremes(&p, 100, 0, 1, &grid),
            Err(Error::Usage(_))
        ));
    }
}
