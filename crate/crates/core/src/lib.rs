//! Exact and semiclassical Wigner 3j-symbols.
//!
//! The crate computes 3j-symbols exactly by two independent routes (the
//! classical single-sum formula and an analytic reduction of a Gaussian
//! inner-product integral), constructs the stationary-phase geometry behind
//! their large-j limit, evaluates the asymptotic formula
//! `cos(S + pi/4) / sqrt(2 pi |Delta_z|)`, and verifies the 8x8 transversal
//! Hessian entry by entry against finite differences and three independent
//! determinant routes.
//!
//! Entry points:
//! - [`exact::racah_3j`] / [`exact::bargmann_moment_3j`] — exact values as
//!   [`SignedSqrtRational`].
//! - [`geometry::stationary_point`] — triangle angles, tilt/twist rotations,
//!   SU(2)-lifted spinors and their Hopf projections.
//! - [`semiclassical::asymptotic_3j`] — the asymptotic evaluation.
//! - [`hessian::hessian_report`] — analytic vs finite-difference Hessian and
//!   the determinant cross-checks.
//! - [`verify`] — the seeded verification suites behind `w3j verify`.

pub mod error;
pub mod hessian;
pub mod semiclassical;
pub mod exact;
pub mod geometry;
pub mod halfint;
pub mod sqrt_rational;
pub mod verify;

pub use error::{Error, Result};
pub use halfint::{selection_rules, triangle_satisfied, HalfInt, JmConfig, SelectionOutcome};
pub use sqrt_rational::SignedSqrtRational;

/// Format with 12 significant digits, locale-independent.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..=15).contains(&exp) {
        return format!("{v:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub mod cli;
