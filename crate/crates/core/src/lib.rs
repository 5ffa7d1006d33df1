//! Closed-form solutions of the fractional equation
//! `D^α u(t) - m u(t) = f(t)` (Riemann-Liouville, `1 < α <= 2`) under initial,
//! inner and inner-boundary conditions, with the numerical fractional calculus
//! needed to check them and a spectral solver for the associated PDE.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Test reference values keep every digit of the high-precision oracle.
#![cfg_attr(test, allow(clippy::excessive_precision, clippy::approx_constant))]

pub mod cli;
pub mod fraccalc;
pub mod quad;
pub mod solvers;
pub mod special;
pub mod spectral;
