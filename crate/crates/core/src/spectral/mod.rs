//! Eigenfunction expansion for `D^α u + A u = f` with `A` self-adjoint and
//! positive with discrete spectrum.
//!
//! Each mode `ξ` reduces to the scalar equation `D^α u_ξ - m u_ξ = f_ξ` with
//! `m = -m_ξ`, solved under the same condition family as the PDE. Norms are
//! evaluated in coefficient space (Parseval) with the time weight
//! `χ(t) = t^{2(2-α)}` on `[0, 1)` and `1` afterwards.

mod provider;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{left_graded_rule, neumaier_sum, Rule};
use crate::solvers::{
    solve_cauchy, solve_inner, solve_inner_boundary, CauchySpec, ConditionReport, EquationParams, Family,
    InnerBoundarySpec, InnerSpec, ScalarSolution, SolverError, SourceTerm,
};

pub use provider::{DirichletLaplacian, SpectrumProvider, TabulatedSpectrum};

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    #[error("mode {xi}: degenerate condition system (det = {:e})", .report.det)]
    DegenerateMode { xi: usize, report: Box<ConditionReport> },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("all data norms vanish")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

pub type SpatialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A spatial field, given by values or by its expansion coefficients.
#[derive(Clone, Default)]
pub enum SpatialData {
    #[default]
    Zero,
    /// `(g, e_ξ)` for `ξ = 1, 2, ...`; missing entries are zero.
    Coefficients(Vec<f64>),
    Function(SpatialFn),
}

impl fmt::Debug for SpatialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialData::Zero => write!(f, "Zero"),
            SpatialData::Coefficients(c) => f.debug_tuple("Coefficients").field(c).finish(),
            SpatialData::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// Space-time forcing.
#[derive(Clone, Default)]
pub enum Forcing {
    #[default]
    Zero,
    /// `Σ g_i(t) h_i(x)`.
    Separable(Vec<(SourceTerm, SpatialData)>),
    /// `f(t, x)` projected at `n_times + 1` uniform times, linear in between.
    Sampled { f: SpaceTimeFn, n_times: usize },
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Zero => write!(f, "Zero"),
            Forcing::Separable(t) => f.debug_tuple("Separable").field(t).finish(),
            Forcing::Sampled { n_times, .. } => write!(f, "Sampled {{ n_times: {n_times} }}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PdeConditions {
    /// `u1`, `u2` are the weighted initial values of `I^β u` and `D^γ u`.
    Cauchy,
    /// `u1 = I^β u(a)`, `u2 = D^γ u(a)`.
    Inner { a: f64 },
    /// `u1 = I^β u(a)`, `u2 = D^γ u(b)`.
    InnerBoundary { a: f64, b: f64 },
}

#[derive(Debug, Clone)]
pub struct PdeProblem {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t_end: f64,
    pub conditions: PdeConditions,
    pub u1: SpatialData,
    pub u2: SpatialData,
    pub f: Forcing,
    pub n_modes: usize,
    pub quad_n: usize,
}

impl PdeProblem {
    pub fn cauchy(alpha: f64, beta: f64, gamma: f64, t_end: f64, n_modes: usize) -> Self {
        PdeProblem {
            alpha,
            beta,
            gamma,
            t_end,
            conditions: PdeConditions::Cauchy,
            u1: SpatialData::Zero,
            u2: SpatialData::Zero,
            f: Forcing::Zero,
            n_modes,
            quad_n: crate::solvers::DEFAULT_QUAD_N,
        }
    }
}

/// Projections of the data onto mode `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeData {
    pub xi: usize,
    pub u1_coef: f64,
    pub u2_coef: f64,
    pub f_coef: SourceTerm,
}

#[derive(Debug, Clone)]
pub struct Mode {
    pub data: ModeData,
    pub m_xi: f64,
    pub solution: ScalarSolution,
}

/// Truncated expansion `u(t, x) = Σ_{ξ ≤ N} u_ξ(t) e_ξ(x)`.
#[derive(Clone)]
pub struct SeriesSolution {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t_end: f64,
    pub conditions: PdeConditions,
    pub modes: Vec<Mode>,
    provider: Arc<dyn SpectrumProvider>,
}

impl fmt::Debug for SeriesSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesSolution")
            .field("alpha", &self.alpha)
            .field("conditions", &self.conditions)
            .field("n_modes", &self.modes.len())
            .finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeRecord {
    pub xi: usize,
    pub m_xi: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesRecord {
    pub family: Family,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub tail_indicator: f64,
    pub modes: Vec<ModeRecord>,
}

/// `(g, e_ξ)` for `ξ = 1..=n`.
pub fn project(g: &dyn Fn(f64) -> f64, n: usize, sp: &dyn SpectrumProvider) -> Result<Vec<f64>, SpectralError> {
    if n == 0 {
        return Err(SpectralError::Invalid("projection needs N >= 1".into()));
    }
    let rule = sp.quadrature(n);
    let gv: Vec<f64> = rule.nodes.iter().map(|&x| g(x)).collect();
    if let Some(i) = gv.iter().position(|v| !v.is_finite()) {
        return Err(SpectralError::QuadratureFailure(format!("non-finite value at x = {}", rule.nodes[i])));
    }
    Ok((1..=n)
        .map(|xi| neumaier_sum(rule.nodes.iter().zip(&rule.weights).zip(&gv).map(|((&x, &w), &v)| w * v * sp.eigenfunction(xi, x))))
        .collect())
}

fn coefficients(d: &SpatialData, n: usize, sp: &dyn SpectrumProvider) -> Result<Vec<f64>, SpectralError> {
    match d {
        SpatialData::Zero => Ok(vec![0.0; n]),
        SpatialData::Coefficients(c) => Ok((0..n).map(|i| c.get(i).copied().unwrap_or(0.0)).collect()),
        SpatialData::Function(g) => project(g.as_ref(), n, sp),
    }
}

fn mode_forcing(f: &Forcing, n: usize, t_end: f64, sp: &dyn SpectrumProvider) -> Result<Vec<SourceTerm>, SpectralError> {
    match f {
        Forcing::Zero => Ok(vec![SourceTerm::Zero; n]),
        Forcing::Separable(terms) => {
            let mut per_mode: Vec<Vec<SourceTerm>> = vec![Vec::new(); n];
            for (g, h) in terms {
                for (xi, c) in coefficients(h, n, sp)?.into_iter().enumerate() {
                    if c != 0.0 && !g.is_zero() {
                        per_mode[xi].push(g.scaled(c));
                    }
                }
            }
            Ok(per_mode
                .into_iter()
                .map(|mut v| match v.len() {
                    0 => SourceTerm::Zero,
                    1 => v.pop().expect("one term"),
                    _ => SourceTerm::Sum { terms: v },
                })
                .collect())
        }
        Forcing::Sampled { f, n_times } => {
            if *n_times < 1 {
                return Err(SpectralError::Invalid("sampled forcing needs n_times >= 1".into()));
            }
            let ts: Vec<f64> = (0..=*n_times).map(|k| t_end * k as f64 / *n_times as f64).collect();
            let per_time: Vec<Vec<f64>> = ts
                .iter()
                .map(|&t| project(&|x| f(t, x), n, sp))
                .collect::<Result<_, _>>()?;
            Ok((0..n)
                .map(|xi| SourceTerm::Table { t: ts.clone(), f: per_time.iter().map(|row| row[xi]).collect() })
                .collect())
        }
    }
}

/// Solves every retained mode with `m = -m_ξ`. Any degenerate mode aborts the solve.
pub fn solve_pde(problem: &PdeProblem, sp: Arc<dyn SpectrumProvider>) -> Result<SeriesSolution, SpectralError> {
    let n = problem.n_modes;
    if n == 0 {
        return Err(SpectralError::Invalid("truncation N must be at least 1".into()));
    }
    if n > sp.max_modes() {
        return Err(SpectralError::Invalid(format!("provider has only {} modes, N = {n}", sp.max_modes())));
    }
    let u1 = coefficients(&problem.u1, n, sp.as_ref())?;
    let u2 = coefficients(&problem.u2, n, sp.as_ref())?;
    let fs = mode_forcing(&problem.f, n, problem.t_end, sp.as_ref())?;

    let data: Vec<ModeData> = (0..n)
        .map(|i| ModeData { xi: i + 1, u1_coef: u1[i], u2_coef: u2[i], f_coef: fs[i].clone() })
        .collect();
    let solved: Vec<Result<Mode, SpectralError>> = data
        .into_par_iter()
        .map(|d| solve_mode(problem, sp.as_ref(), d))
        .collect();
    let modes = solved.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(SeriesSolution {
        alpha: problem.alpha,
        beta: problem.beta,
        gamma: problem.gamma,
        t_end: problem.t_end,
        conditions: problem.conditions,
        modes,
        provider: sp,
    })
}

fn solve_mode(p: &PdeProblem, sp: &dyn SpectrumProvider, d: ModeData) -> Result<Mode, SpectralError> {
    let m_xi = sp.eigenvalue(d.xi);
    if !(m_xi > 0.0) {
        return Err(SpectralError::Invalid(format!("eigenvalue m_{} = {m_xi} is not positive", d.xi)));
    }
    let eq = EquationParams::new(p.alpha, -m_xi, p.t_end)?;
    let f = d.f_coef.clone();
    let res = match p.conditions {
        PdeConditions::Cauchy => {
            let mut s = CauchySpec::new(eq, p.beta, p.gamma, d.u1_coef, d.u2_coef, f);
            s.quad_n = p.quad_n;
            solve_cauchy(&s)
        }
        PdeConditions::Inner { a } => {
            let mut s = InnerSpec::new(eq, p.beta, p.gamma, a, d.u1_coef, d.u2_coef, f);
            s.quad_n = p.quad_n;
            solve_inner(&s)
        }
        PdeConditions::InnerBoundary { a, b } => {
            let mut s = InnerBoundarySpec::new(eq, p.beta, p.gamma, a, b, d.u1_coef, d.u2_coef, f);
            s.quad_n = p.quad_n;
            solve_inner_boundary(&s)
        }
    };
    match res {
        Ok(solution) => Ok(Mode { data: d, m_xi, solution }),
        Err(SolverError::DegenerateSystem(report)) => Err(SpectralError::DegenerateMode { xi: d.xi, report }),
        Err(e) => Err(e.into()),
    }
}

impl SeriesSolution {
    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn provider(&self) -> &dyn SpectrumProvider {
        self.provider.as_ref()
    }

    /// The first `n` modes.
    pub fn truncated(&self, n: usize) -> SeriesSolution {
        let mut s = self.clone();
        s.modes.truncate(n);
        s
    }

    /// `u_ξ(t)` for every retained mode.
    pub fn mode_values(&self, t: f64) -> Result<Vec<f64>, SpectralError> {
        Ok(self.modes.iter().map(|m| m.solution.eval(t)).collect::<Result<Vec<_>, _>>()?)
    }

    /// `Σ u_ξ(t) e_ξ(x)`.
    pub fn eval(&self, t: f64, x: f64) -> Result<f64, SpectralError> {
        let u = self.mode_values(t)?;
        Ok(neumaier_sum(self.modes.iter().zip(u).map(|(m, v)| v * self.provider.eigenfunction(m.data.xi, x))))
    }

    /// `(t, x, u)` on a tensor grid, `t`-major.
    pub fn sample(&self, ts: &[f64], xs: &[f64]) -> Result<Vec<[f64; 3]>, SpectralError> {
        let rows: Vec<Vec<[f64; 3]>> = ts
            .par_iter()
            .map(|&t| {
                let u = self.mode_values(t)?;
                Ok(xs
                    .iter()
                    .map(|&x| {
                        let v = neumaier_sum(
                            self.modes.iter().zip(&u).map(|(m, v)| v * self.provider.eigenfunction(m.data.xi, x)),
                        );
                        [t, x, v]
                    })
                    .collect())
            })
            .collect::<Result<_, SpectralError>>()?;
        Ok(rows.into_iter().flatten().collect())
    }

    /// `Σ u_ξ(t)²`.
    pub fn coefficient_norm_sq(&self, t: f64) -> Result<f64, SpectralError> {
        Ok(neumaier_sum(self.mode_values(t)?.into_iter().map(|v| v * v)))
    }

    /// `∫ u(t, x)² dx` by the provider's spatial rule.
    pub fn spatial_norm_sq(&self, t: f64) -> Result<f64, SpectralError> {
        let rule = self.provider.quadrature(self.modes.len().max(1));
        let u = self.mode_values(t)?;
        Ok(rule.apply(|x| {
            let v = neumaier_sum(self.modes.iter().zip(&u).map(|(m, v)| v * self.provider.eigenfunction(m.data.xi, x)));
            v * v
        }))
    }

    /// Largest data magnitude on the last retained mode.
    pub fn tail_indicator(&self) -> f64 {
        let Some(last) = self.modes.last() else { return 0.0 };
        let d = &last.data;
        let f_sup = (0..=16)
            .map(|k| d.f_coef.eval(self.t_end * k as f64 / 16.0).abs())
            .filter(|v| v.is_finite())
            .fold(0.0, f64::max);
        d.u1_coef.abs().max(d.u2_coef.abs()).max(f_sup)
    }

    pub fn record(&self) -> SeriesRecord {
        let (family, a, b) = match self.conditions {
            PdeConditions::Cauchy => (Family::Cauchy, None, None),
            PdeConditions::Inner { a } => (Family::Inner, Some(a), None),
            PdeConditions::InnerBoundary { a, b } => (Family::InnerBoundary, Some(a), Some(b)),
        };
        SeriesRecord {
            family,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            a,
            b,
            n: self.modes.len(),
            tail_indicator: self.tail_indicator(),
            modes: self
                .modes
                .iter()
                .map(|m| ModeRecord { xi: m.data.xi, m_xi: m.m_xi, c1: m.solution.c1, c2: m.solution.c2 })
                .collect(),
        }
    }

    fn max_frequency(&self) -> f64 {
        self.modes.iter().map(|m| m.m_xi.powf(1.0 / self.alpha)).fold(0.0, f64::max)
    }
}

/// `χ(t) = t^{2(2-α)}` on `[0, 1)`, `1` on `[1, ∞)`.
pub fn chi(t: f64, alpha: f64) -> f64 {
    if t >= 1.0 {
        1.0
    } else {
        t.powf(2.0 * (2.0 - alpha))
    }
}

const GRADED_NODES: usize = 144;

/// Time rule on `(0, T]`, graded toward `0` on `[0, min(1, T)]` and uniform
/// beyond; `n` is the bulk node count.
fn time_rule(t_end: f64, omega: f64, n: usize) -> Rule {
    let t1 = t_end.min(1.0);
    let mut rule = left_graded_rule(t1, 0.0, n + GRADED_NODES, (omega * t1).ceil() as usize);
    if t_end > 1.0 {
        let panels = (n / 8).max((omega * (t_end - 1.0)).ceil() as usize).max(2);
        let tail = provider::composite_rule(1.0, t_end, panels);
        rule.nodes.extend(tail.nodes);
        rule.weights.extend(tail.weights);
    }
    rule
}

/// `‖u‖`, `‖A u‖` and `‖D^α u‖` in `L²_χ(0, T; H)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesNorms {
    pub u: f64,
    pub a_u: f64,
    pub d_alpha_u: f64,
}

fn check_time_args(t_end: f64, n: usize) -> Result<(), SpectralError> {
    if n < 16 {
        return Err(SpectralError::Invalid(format!("time_quad_n = {n} must be at least 16")));
    }
    if !(t_end > 0.0) {
        return Err(SpectralError::Invalid(format!("T = {t_end} must be positive")));
    }
    Ok(())
}

/// `∫_0^T Σ_ξ w(ξ, t) χ(t) dt` for a per-node, per-mode integrand.
fn weighted_time_integral<F>(rule: &Rule, alpha: f64, per_node: F) -> Result<Vec<f64>, SpectralError>
where
    F: Fn(f64) -> Result<Vec<f64>, SpectralError> + Sync,
{
    let vals: Vec<Vec<f64>> = rule.nodes.par_iter().map(|&t| per_node(t)).collect::<Result<_, _>>()?;
    let k = vals.first().map_or(0, |v| v.len());
    let out: Vec<f64> = (0..k)
        .map(|c| neumaier_sum(rule.weights.iter().zip(&rule.nodes).zip(&vals).map(|((w, &t), v)| w * chi(t, alpha) * v[c])))
        .collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(SpectralError::QuadratureFailure("non-finite time integral".into()));
    }
    Ok(out)
}

pub fn series_norms(s: &SeriesSolution, t_end: f64, time_quad_n: usize) -> Result<SeriesNorms, SpectralError> {
    check_time_args(t_end, time_quad_n)?;
    let rule = time_rule(t_end, s.max_frequency(), time_quad_n);
    let sq = weighted_time_integral(&rule, s.alpha, |t| {
        let u = s.mode_values(t)?;
        let mut acc = [Vec::new(), Vec::new(), Vec::new()];
        for (m, v) in s.modes.iter().zip(u) {
            let au = m.m_xi * v;
            let du = -au + m.data.f_coef.eval(t);
            acc[0].push(v * v);
            acc[1].push(au * au);
            acc[2].push(du * du);
        }
        Ok(acc.into_iter().map(neumaier_sum).collect())
    })?;
    Ok(SeriesNorms { u: sq[0].sqrt(), a_u: sq[1].sqrt(), d_alpha_u: sq[2].sqrt() })
}

/// `‖u‖_{L²_χ(0, T; H)}`.
pub fn weighted_l2_norm(s: &SeriesSolution, t_end: f64, time_quad_n: usize) -> Result<f64, SpectralError> {
    Ok(series_norms(s, t_end, time_quad_n)?.u)
}

/// `‖u - v‖_{L²_χ(0, T; H)}`, modes matched by index (missing modes are zero).
pub fn difference_norm(
    u: &SeriesSolution,
    v: &SeriesSolution,
    t_end: f64,
    time_quad_n: usize,
) -> Result<f64, SpectralError> {
    check_time_args(t_end, time_quad_n)?;
    let omega = u.max_frequency().max(v.max_frequency());
    let rule = time_rule(t_end, omega, time_quad_n);
    let sq = weighted_time_integral(&rule, u.alpha, |t| {
        let a = u.mode_values(t)?;
        let b = v.mode_values(t)?;
        let k = a.len().max(b.len());
        let d = (0..k).map(|i| {
            let x = a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0);
            x * x
        });
        Ok(vec![neumaier_sum(d)])
    })?;
    Ok(sq[0].sqrt())
}

/// `‖u1‖_H`, `‖u2‖_H`, `‖f‖_{L²(0, T; H)}` from the retained coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DataNorms {
    pub u1: f64,
    pub u2: f64,
    pub f: f64,
}

pub fn data_norms(s: &SeriesSolution, t_end: f64, time_quad_n: usize) -> Result<DataNorms, SpectralError> {
    check_time_args(t_end, time_quad_n)?;
    let u1 = neumaier_sum(s.modes.iter().map(|m| m.data.u1_coef.powi(2))).sqrt();
    let u2 = neumaier_sum(s.modes.iter().map(|m| m.data.u2_coef.powi(2))).sqrt();
    let forced = s.modes.iter().any(|m| !m.data.f_coef.is_zero());
    let f = if forced {
        let rule = left_graded_rule(t_end, 0.0, time_quad_n + GRADED_NODES, 0);
        let v = neumaier_sum(rule.nodes.iter().zip(&rule.weights).map(|(&t, w)| {
            w * neumaier_sum(s.modes.iter().map(|m| m.data.f_coef.eval(t).powi(2)))
        }));
        if !v.is_finite() {
            return Err(SpectralError::QuadratureFailure("forcing is not square integrable".into()));
        }
        v.sqrt()
    } else {
        0.0
    };
    Ok(DataNorms { u1, u2, f })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    U,
    AU,
    DAlphaU,
}

/// `‖·‖²_{L²_χ} / (‖u1‖² + ‖u2‖² + ‖f‖²)` for the chosen quantity.
pub fn stability_ratio(norms: &SeriesNorms, data: &DataNorms, kind: NormKind) -> Result<f64, SpectralError> {
    let denom = data.u1 * data.u1 + data.u2 * data.u2 + data.f * data.f;
    if denom == 0.0 {
        return Err(SpectralError::DivisionByZero);
    }
    let v = match kind {
        NormKind::U => norms.u,
        NormKind::AU => norms.a_u,
        NormKind::DAlphaU => norms.d_alpha_u,
    };
    Ok(v * v / denom)
}
