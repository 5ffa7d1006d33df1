//! Condition families and the 2×2 systems fixing `(C1, C2)`.

use serde::Serialize;

use super::scalar::{source_moment, Family, ScalarSolution, DEFAULT_QUAD_N};
use super::{check_orders, ErrorCode, EquationParams, SolverError, SourceTerm, EDGE_TOL};
use crate::special::MittagLeffler;

/// Relative determinant margin below which a condition system is degenerate.
pub const DEGENERACY_EPSILON: f64 = 1e-10;

/// Data `(ĉ1, ĉ2)` at `t = 0`: `Γ(α+β-1) t^{2-α-β} I^β u → ĉ1` and `D^γ u → ĉ2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchySpec {
    pub eq: EquationParams,
    pub beta: f64,
    pub gamma: f64,
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub source: SourceTerm,
    pub quad_n: usize,
}

/// `(I^β u)(a) = d̂1`, `(D^γ u)(a) = d̂2`, `0 < a < T`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerSpec {
    pub eq: EquationParams,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub d1_hat: f64,
    pub d2_hat: f64,
    pub source: SourceTerm,
    pub quad_n: usize,
}

/// `(I^β u)(a) = ê1`, `(D^γ u)(b) = ê2`, `a, b ∈ (0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerBoundarySpec {
    pub eq: EquationParams,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub e1_hat: f64,
    pub e2_hat: f64,
    pub source: SourceTerm,
    pub quad_n: usize,
}

impl CauchySpec {
    pub fn new(eq: EquationParams, beta: f64, gamma: f64, c1_hat: f64, c2_hat: f64, source: SourceTerm) -> Self {
        CauchySpec { eq, beta, gamma, c1_hat, c2_hat, source, quad_n: DEFAULT_QUAD_N }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        check_orders(self.eq.alpha, self.beta, self.gamma)?;
        self.source.validate()?;
        let critical = (self.gamma - (self.eq.alpha - 1.0)).abs() <= EDGE_TOL;
        if (self.c1_hat != 0.0 || self.c2_hat != 0.0) && !critical {
            return Err(SolverError::invalid(
                ErrorCode::CauchyDataNeedsCriticalGamma,
                format!(
                    "nonzero initial data require gamma = alpha - 1 = {}, got gamma = {}",
                    self.eq.alpha - 1.0,
                    self.gamma
                ),
            ));
        }
        Ok(())
    }
}

impl InnerSpec {
    pub fn new(eq: EquationParams, beta: f64, gamma: f64, a: f64, d1_hat: f64, d2_hat: f64, source: SourceTerm) -> Self {
        InnerSpec { eq, beta, gamma, a, d1_hat, d2_hat, source, quad_n: DEFAULT_QUAD_N }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        check_orders(self.eq.alpha, self.beta, self.gamma)?;
        if !(self.a > 0.0 && self.a < self.eq.t_end) {
            return Err(SolverError::invalid(
                ErrorCode::InnerPointRange,
                format!("a = {} must lie in (0, t_end) = (0, {})", self.a, self.eq.t_end),
            ));
        }
        self.source.validate()
    }
}

impl InnerBoundarySpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        eq: EquationParams,
        beta: f64,
        gamma: f64,
        a: f64,
        b: f64,
        e1_hat: f64,
        e2_hat: f64,
        source: SourceTerm,
    ) -> Self {
        InnerBoundarySpec { eq, beta, gamma, a, b, e1_hat, e2_hat, source, quad_n: DEFAULT_QUAD_N }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        check_orders(self.eq.alpha, self.beta, self.gamma)?;
        let t_end = self.eq.t_end;
        if !(self.a > 0.0 && self.a <= t_end) {
            return Err(SolverError::invalid(
                ErrorCode::InnerPointRange,
                format!("a = {} must lie in (0, t_end] = (0, {t_end}]", self.a),
            ));
        }
        if !(self.b > 0.0 && self.b <= t_end) {
            return Err(SolverError::invalid(
                ErrorCode::BoundaryPointRange,
                format!("b = {} must lie in (0, t_end] = (0, {t_end}]", self.b),
            ));
        }
        self.source.validate()
    }
}

/// Either nonlocal family.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlocalSpec {
    Inner(InnerSpec),
    InnerBoundary(InnerBoundarySpec),
}

impl From<InnerSpec> for NonlocalSpec {
    fn from(s: InnerSpec) -> Self {
        NonlocalSpec::Inner(s)
    }
}

impl From<InnerBoundarySpec> for NonlocalSpec {
    fn from(s: InnerBoundarySpec) -> Self {
        NonlocalSpec::InnerBoundary(s)
    }
}

struct Layout<'a> {
    eq: EquationParams,
    beta: f64,
    gamma: f64,
    a: f64,
    b: f64,
    data: [f64; 2],
    source: &'a SourceTerm,
    quad_n: usize,
    family: Family,
}

impl NonlocalSpec {
    pub fn validate(&self) -> Result<(), SolverError> {
        match self {
            NonlocalSpec::Inner(s) => s.validate(),
            NonlocalSpec::InnerBoundary(s) => s.validate(),
        }
    }

    fn layout(&self) -> Layout<'_> {
        match self {
            NonlocalSpec::Inner(s) => Layout {
                eq: s.eq,
                beta: s.beta,
                gamma: s.gamma,
                a: s.a,
                b: s.a,
                data: [s.d1_hat, s.d2_hat],
                source: &s.source,
                quad_n: s.quad_n,
                family: Family::Inner,
            },
            NonlocalSpec::InnerBoundary(s) => Layout {
                eq: s.eq,
                beta: s.beta,
                gamma: s.gamma,
                a: s.a,
                b: s.b,
                data: [s.e1_hat, s.e2_hat],
                source: &s.source,
                quad_n: s.quad_n,
                family: Family::InnerBoundary,
            },
        }
    }
}

/// The system `matrix · (C1, C2) = rhs` and its solvability diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub family: Family,
    pub a: f64,
    pub b: f64,
    pub matrix: [[f64; 2]; 2],
    pub rhs: [f64; 2],
    /// `[F_I(a), F_D(b)]`, the source contributions already subtracted in `rhs`.
    pub source_moments: [f64; 2],
    pub det: f64,
    /// `E_{α,α+β}(ma^α) E_{α,α-1-γ}(mb^α)`.
    pub power_free_lhs: f64,
    /// `E_{α,α+β-1}(ma^α) E_{α,α-γ}(mb^α)`.
    pub power_free_rhs: f64,
    /// Verdict of `lhs ≠ rhs` (relative margin above `degeneracy_epsilon`).
    pub power_free_solvable: bool,
    /// `a · power_free_lhs` and `b · power_free_rhs`: the factor of `det` left
    /// after removing `a^{α+β-2} b^{α-γ-2}`.
    pub weighted_lhs: f64,
    pub weighted_rhs: f64,
    pub weighted_solvable: bool,
    pub rel_margin: f64,
    pub degeneracy_epsilon: f64,
    pub solvable: bool,
}

/// `|wa·p·s - wb·q·r|` relative to `max(|wa·p|, |wb·q|) · max(|r|, |s|)`.
fn product_gap(v: &AtPoints, wa: f64, wb: f64) -> f64 {
    let scale = (wa * v.p).abs().max((wb * v.q).abs()) * v.r.abs().max(v.s.abs());
    if scale == 0.0 {
        0.0
    } else {
        (wa * v.p * v.s - wb * v.q * v.r).abs() / scale
    }
}

struct AtPoints {
    p: f64,
    q: f64,
    r: f64,
    s: f64,
}

fn ml_values(eq: &EquationParams, beta: f64, gamma: f64, a: f64, b: f64) -> Result<AtPoints, SolverError> {
    let al = eq.alpha;
    let za = eq.m * a.powf(al);
    let zb = eq.m * b.powf(al);
    let e = |beta_ml: f64, z: f64| -> Result<f64, SolverError> { Ok(MittagLeffler::shared(al, beta_ml)?.eval(z)?.value) };
    Ok(AtPoints {
        p: e(al + beta, za)?,
        q: e(al + beta - 1.0, za)?,
        r: e(al - gamma, zb)?,
        s: e(al - 1.0 - gamma, zb)?,
    })
}

/// Assembles the condition system for either nonlocal family. Degeneracy is
/// reported through `solvable`, never raised.
pub fn build_condition_system(spec: &NonlocalSpec) -> Result<ConditionReport, SolverError> {
    spec.validate()?;
    let l = spec.layout();
    let al = l.eq.alpha;
    let v = ml_values(&l.eq, l.beta, l.gamma, l.a, l.b)?;
    let (a, b) = (l.a, l.b);
    let matrix = [
        [a.powf(al + l.beta - 1.0) * v.p, a.powf(al + l.beta - 2.0) * v.q],
        [b.powf(al - l.gamma - 1.0) * v.r, b.powf(al - l.gamma - 2.0) * v.s],
    ];
    let f_i = source_moment(&l.eq, l.source, al + l.beta, a, l.quad_n)?;
    let f_d = source_moment(&l.eq, l.source, al - l.gamma, b, l.quad_n)?;
    let rhs = [l.data[0] - f_i, l.data[1] - f_d];
    let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
    let norm = matrix.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let rel_margin = if norm == 0.0 { 0.0 } else { det.abs() / (norm * norm) };

    let power_free_lhs = v.p * v.s;
    let power_free_rhs = v.q * v.r;
    let weighted_lhs = a * power_free_lhs;
    let weighted_rhs = b * power_free_rhs;
    Ok(ConditionReport {
        family: l.family,
        a,
        b,
        matrix,
        rhs,
        source_moments: [f_i, f_d],
        det,
        power_free_lhs,
        power_free_rhs,
        power_free_solvable: product_gap(&v, 1.0, 1.0) > DEGENERACY_EPSILON,
        weighted_lhs,
        weighted_rhs,
        weighted_solvable: product_gap(&v, a, b) > DEGENERACY_EPSILON,
        rel_margin,
        degeneracy_epsilon: DEGENERACY_EPSILON,
        solvable: rel_margin > DEGENERACY_EPSILON && det.is_finite(),
    })
}

fn solve_nonlocal(spec: &NonlocalSpec) -> Result<ScalarSolution, SolverError> {
    let report = build_condition_system(spec)?;
    if !report.solvable {
        return Err(SolverError::DegenerateSystem(Box::new(report)));
    }
    let [[m11, m12], [m21, m22]] = report.matrix;
    let [r1, r2] = report.rhs;
    let c1 = (r1 * m22 - m12 * r2) / report.det;
    let c2 = (m11 * r2 - m21 * r1) / report.det;
    let l = spec.layout();
    Ok(ScalarSolution::new(l.eq, c1, c2, l.source.clone(), l.family).with_quad_n(l.quad_n))
}

/// Cauchy problem: `C1 = ĉ2`, `C2 = ĉ1`.
pub fn solve_cauchy(spec: &CauchySpec) -> Result<ScalarSolution, SolverError> {
    spec.validate()?;
    Ok(ScalarSolution::new(spec.eq, spec.c2_hat, spec.c1_hat, spec.source.clone(), Family::Cauchy)
        .with_quad_n(spec.quad_n))
}

pub fn solve_inner(spec: &InnerSpec) -> Result<ScalarSolution, SolverError> {
    solve_nonlocal(&NonlocalSpec::Inner(spec.clone()))
}

pub fn solve_inner_boundary(spec: &InnerBoundarySpec) -> Result<ScalarSolution, SolverError> {
    solve_nonlocal(&NonlocalSpec::InnerBoundary(spec.clone()))
}

fn check_index(index: u8) -> Result<(), SolverError> {
    if index == 1 || index == 2 {
        Ok(())
    } else {
        Err(SolverError::invalid(ErrorCode::Numerics, format!("basis index {index} must be 1 or 2")))
    }
}

fn check_positive(name: &str, x: f64) -> Result<(), SolverError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SolverError::invalid(ErrorCode::Numerics, format!("{name} = {x} must be positive")))
    }
}

/// `t^{α-2} [c_a t E_{α,α}(m t^α) + c_b E_{α,α-1}(m t^α)]`.
fn combine(eq: &EquationParams, t: f64, c_t: f64, c_1: f64) -> Result<f64, SolverError> {
    let al = eq.alpha;
    let z = eq.m * t.powf(al);
    let e_aa = MittagLeffler::shared(al, al)?.eval(z)?.value;
    let e_a1 = MittagLeffler::shared(al, al - 1.0)?.eval(z)?.value;
    Ok(t.powf(al - 2.0) * (c_t * t * e_aa + c_1 * e_a1))
}

fn check_denominator(v: &AtPoints, wa: f64, wb: f64) -> Result<f64, SolverError> {
    let d = wa * v.p * v.s - wb * v.q * v.r;
    if product_gap(v, wa, wb) <= DEGENERACY_EPSILON || !d.is_finite() {
        return Err(SolverError::DegenerateDenominator(d));
    }
    Ok(d)
}

/// Closed-form inner interpolation basis `Ê_index(t)`: the `f ≡ 0` solution
/// with inner data `(1, 0)` (index 1) or `(0, 1)` (index 2) at `a`.
pub fn e_hat(index: u8, eq: &EquationParams, beta: f64, gamma: f64, a: f64, t: f64) -> Result<f64, SolverError> {
    check_index(index)?;
    check_positive("a", a)?;
    check_positive("t", t)?;
    let al = eq.alpha;
    let v = ml_values(eq, beta, gamma, a, a)?;
    let bracket = check_denominator(&v, 1.0, 1.0)?;
    if index == 1 {
        let num = combine(eq, t, v.s, -a * v.r)?;
        Ok(num / (a.powf(al + beta - 1.0) * bracket))
    } else {
        let num = combine(eq, t, -v.q, a * v.p)?;
        Ok(num / (a.powf(al - gamma - 1.0) * bracket))
    }
}

/// Which denominator [`f_hat`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FhatForm {
    /// `[E_{α,α+β}(ma^α)E_{α,α-1-γ}(mb^α) - E_{α,α+β-1}(ma^α)E_{α,α-γ}(mb^α)]`, as commonly printed.
    AsPrinted,
    /// The same bracket with the products weighted by `a` and `b`; this is the
    /// determinant of the system divided by `a^{α+β-2} b^{α-γ-2}`.
    Resolved,
}

/// Closed-form inner-boundary interpolation basis `F̂_index(t)`.
///
/// Only [`FhatForm::Resolved`] satisfies the interpolation conditions for
/// general `a`, `b`; [`FhatForm::AsPrinted`] differs from it by the factor
/// `(a·lhs - b·rhs)/(lhs - rhs)`.
#[allow(clippy::too_many_arguments)]
pub fn f_hat(
    index: u8,
    eq: &EquationParams,
    beta: f64,
    gamma: f64,
    a: f64,
    b: f64,
    t: f64,
    form: FhatForm,
) -> Result<f64, SolverError> {
    check_index(index)?;
    check_positive("a", a)?;
    check_positive("b", b)?;
    check_positive("t", t)?;
    let al = eq.alpha;
    let v = ml_values(eq, beta, gamma, a, b)?;
    let bracket = match form {
        FhatForm::AsPrinted => check_denominator(&v, 1.0, 1.0)?,
        FhatForm::Resolved => check_denominator(&v, a, b)?,
    };
    if index == 1 {
        let num = combine(eq, t, v.s, -b * v.r)?;
        Ok(num / (a.powf(al + beta - 2.0) * bracket))
    } else {
        let num = combine(eq, t, -v.q, a * v.p)?;
        Ok(num / (b.powf(al - gamma - 2.0) * bracket))
    }
}
