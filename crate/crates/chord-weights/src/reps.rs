//! Reduction of an adjoint-invariant pairing on a representation to two
//! scalar constants.
//!
//! For a representation R of a simple algebra g, the Casimir-style pairing
//! sum over dual bases, evaluated against a pair of test matrices (P, Q),
//! collapses on its invariant component to the two-parameter family
//! A * Tr(P)Tr(Q) + B * Tr(PQ). The constants are pinned by two linear
//! constraints that only need coarse data about the representation:
//!
//! * P = Q = identity counts dimensions: `A * dim_R^2 + B * dim_R = dim_G`.
//! * Restricting to the image of a coroot h (normalized so that its root
//!   value is 2) compares the quadratic characters:
//!   `B * Tr(R(h)^2) = (dim_G / dim_R) * Tr(R(h)^2)
//!    - (sum over positive roots of beta(h)^2) * Tr(R(h)^2) / 2`.
//!
//! The system is singular exactly when `dim_R = 0` or `Tr(R(h)^2) = 0`.

use num_traits::Zero;

use crate::poly::{rat, rint, Rational};
use crate::{Error, Result};

/// Coarse representation data consumed by [`solve_ab`]. All fields are exact
/// rationals so that oracle-computed inputs stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepData {
    /// Dimension of the representation space.
    pub dim_r: Rational,
    /// Dimension of the algebra.
    pub dim_g: Rational,
    /// Trace of R(h)^2 for the normalized coroot h.
    pub tr_h_sq: Rational,
    /// Sum of beta(h)^2 over the positive roots beta.
    pub sum_beta_h_sq: Rational,
}

/// Solve the two-constraint linear system for (A, B).
pub fn solve_ab(d: &RepData) -> Result<(Rational, Rational)> {
    if d.dim_r.is_zero() || d.tr_h_sq.is_zero() {
        return Err(Error::Domain(
            "representation data leaves the constants underdetermined \
             (zero dimension or zero coroot trace)"
                .into(),
        ));
    }
    // Second constraint: Tr(R(h)^2) cancels, leaving B directly.
    let b = &d.dim_g / &d.dim_r - &d.sum_beta_h_sq / rint(2);
    // First constraint then yields A.
    let a = (&d.dim_g - &b * &d.dim_r) / (&d.dim_r * &d.dim_r);
    Ok((a, b))
}

/// Closed form of the constants for the (k+1)-dimensional irreducible
/// representation of sl(2): A = 2/(k+1), B = (1-2k)/(k+1).
pub fn sl2_constants(k: u32) -> Result<(Rational, Rational)> {
    if k == 0 {
        return Err(Error::Domain(
            "the trivial representation (k = 0) leaves the constants underdetermined".into(),
        ));
    }
    let k = k as i64;
    Ok((rat(2, k + 1), rat(1 - 2 * k, k + 1)))
}
