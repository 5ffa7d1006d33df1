//! Closed-form solutions of `D^α u - m u = f` on `(0, T]`, `1 < α ≤ 2`.
//!
//! Every solution has the form
//!
//! ```text
//! u(t) = C1 t^{α-1} E_{α,α}(m t^α) + C2 t^{α-2} E_{α,α-1}(m t^α)
//!      + ∫_0^t (t-s)^{α-1} E_{α,α}(m (t-s)^α) f(s) ds
//! ```
//!
//! and the three condition families only differ in how `(C1, C2)` are fixed:
//!
//! * Cauchy: weighted limits of `I^β u` and `D^γ u` at `t = 0`;
//! * inner: `I^β u` and `D^γ u` at an interior point `a`;
//! * inner-boundary: `I^β u` at `a` and `D^γ u` at `b`.
//!
//! The nonlocal families always solve the 2×2 system for `(C1, C2)` directly.
//! The closed-form interpolation bases [`e_hat`] and [`f_hat`] are offered as
//! independent cross-checks.

mod conditions;
mod scalar;
mod source;
mod verify;

use serde::Serialize;
use thiserror::Error;

use crate::fraccalc::FracCalcError;
use crate::special::SpecialError;

pub use conditions::{
    build_condition_system, e_hat, f_hat, solve_cauchy, solve_inner, solve_inner_boundary, CauchySpec,
    ConditionReport, FhatForm, InnerBoundarySpec, InnerSpec, NonlocalSpec, DEGENERACY_EPSILON,
};
pub use scalar::{
    basis1, basis2, duhamel, source_moment, Family, ScalarSolution, SolutionRecord, DEFAULT_QUAD_N,
};
pub use source::SourceTerm;
pub use verify::{
    cauchy_functionals, residual_report, singular_exponent_estimate, ResidualReport, RESIDUAL_WINDOW,
};

/// Tolerance used when a parameter must sit on a range boundary (`γ = α-1`, `β = 2-α`).
pub(crate) const EDGE_TOL: f64 = 1e-12;

/// Stable diagnostic codes for rejected inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorCode {
    AlphaRange,
    CoefficientNonFinite,
    HorizonRange,
    BetaRange,
    GammaRange,
    CauchyDataNeedsCriticalGamma,
    InnerPointRange,
    BoundaryPointRange,
    Source,
    Numerics,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::AlphaRange => "E_ALPHA_RANGE",
            ErrorCode::CoefficientNonFinite => "E_M_NONFINITE",
            ErrorCode::HorizonRange => "E_T_END_RANGE",
            ErrorCode::BetaRange => "E_BETA_RANGE",
            ErrorCode::GammaRange => "E_GAMMA_RANGE",
            ErrorCode::CauchyDataNeedsCriticalGamma => "E_CAUCHY_GAMMA_NOT_CRITICAL",
            ErrorCode::InnerPointRange => "E_A_RANGE",
            ErrorCode::BoundaryPointRange => "E_B_RANGE",
            ErrorCode::Source => "E_SOURCE",
            ErrorCode::Numerics => "E_NUMERICS",
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum SolverError {
    #[error("{}: {message}", code.as_str())]
    Invalid { code: ErrorCode, message: String },
    #[error("the t^(alpha-2) term is unbounded at t = 0")]
    SingularAtZero,
    #[error("degenerate condition system (det = {:e}, relative margin {:e})", .0.det, .0.rel_margin)]
    DegenerateSystem(Box<ConditionReport>),
    #[error("closed-form basis denominator vanishes ({0:e})")]
    DegenerateDenominator(f64),
    #[error("solution vanishes on the fitting window")]
    Underflow,
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    FracCalc(#[from] FracCalcError),
}

impl SolverError {
    pub(crate) fn invalid(code: ErrorCode, message: impl Into<String>) -> Self {
        SolverError::Invalid { code, message: message.into() }
    }
}

/// Order `α`, coefficient `m` and horizon `T` of `D^α u - m u = f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquationParams {
    pub alpha: f64,
    pub m: f64,
    pub t_end: f64,
}

impl EquationParams {
    pub fn new(alpha: f64, m: f64, t_end: f64) -> Result<Self, SolverError> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(SolverError::invalid(ErrorCode::AlphaRange, format!("alpha = {alpha} must lie in (1, 2]")));
        }
        if !m.is_finite() {
            return Err(SolverError::invalid(ErrorCode::CoefficientNonFinite, format!("m = {m} is not finite")));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(SolverError::invalid(ErrorCode::HorizonRange, format!("t_end = {t_end} must be positive")));
        }
        Ok(EquationParams { alpha, m, t_end })
    }
}

/// Checks `0 ≤ β ≤ 2-α` and `0 < γ ≤ α-1`.
pub fn check_orders(alpha: f64, beta: f64, gamma: f64) -> Result<(), SolverError> {
    if !(beta >= 0.0 && beta <= 2.0 - alpha + EDGE_TOL) {
        return Err(SolverError::invalid(
            ErrorCode::BetaRange,
            format!("beta = {beta} must lie in [0, 2 - alpha] = [0, {}]", 2.0 - alpha),
        ));
    }
    if !(gamma > 0.0 && gamma <= alpha - 1.0 + EDGE_TOL) {
        return Err(SolverError::invalid(
            ErrorCode::GammaRange,
            format!("gamma = {gamma} must lie in (0, alpha - 1] = (0, {}]", alpha - 1.0),
        ));
    }
    Ok(())
}
