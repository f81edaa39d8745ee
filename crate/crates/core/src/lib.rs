//! Generalized Maxwell distribution and the asymptotics of its extremes.
//!
//! The crate provides, in dependency order:
//!
//! - [`specfun`]: log-gamma, regularized incomplete gamma P/Q with a
//!   tail-accurate inverse, and erfc;
//! - [`gmd`]: the two-sided generalized Maxwell distribution GMD(k, σ) as a
//!   value type (pdf/cdf/sf/quantile/sampling and the Mills-type tail
//!   series);
//! - [`norming`]: the norming constant b_n solving n·(1 − F(b_n)) = 1 and
//!   the affine levels u(x, b_n), v(y, b_n);
//! - [`expansions`]: the Gumbel law, the correction coefficients, and the
//!   order-1/2/3 approximants of the marginal and joint extreme laws;
//! - [`exact`]: loss-free finite-n laws of the normalized (max, min) pair;
//! - [`lab`]: error tables, Richardson-extrapolated limit probes,
//!   convergence-rate fits, and Monte Carlo validation;
//! - [`cli`]: the `gmd-extremes` command-line surface with CSV/JSON reports;
//! - [`quad`]: Gauss-Legendre quadrature shared by the verification suites.
//!
//! # Example
//!
//! ```
//! use gmd_extremes::{exact, expansions, ApproxOrder, GmdParams, JointPoint};
//! use gmd_extremes::norming::solve_norming;
//!
//! let dist = GmdParams::new(1.0, 1.0).unwrap();
//! let nm = solve_norming(&dist, 500.0).unwrap();
//! let exact = exact::exact_joint_cdf(&dist, &nm, JointPoint::new(2.0, 6.0));
//! let s3 = expansions::approx_joint_cdf(&dist, &nm, 2.0, 6.0, ApproxOrder::Third);
//! assert!((exact - s3).abs() < 2e-3);
//! ```

pub mod cli;
pub mod error;
pub mod exact;
pub mod expansions;
pub mod gmd;
pub mod lab;
pub mod norming;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use exact::JointPoint;
pub use expansions::ApproxOrder;
pub use gmd::GmdParams;
pub use norming::Norming;
