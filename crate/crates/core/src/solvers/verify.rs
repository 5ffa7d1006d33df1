//! Numerical checks of constructed solutions.

use rayon::prelude::*;
use serde::Serialize;

use super::scalar::ScalarSolution;
use super::{ErrorCode, SolverError};
use crate::fraccalc::{rl_derivative2_all, SampledFunction, UniformGrid};
use crate::special::gamma;

/// Residual window start as a fraction of the horizon.
pub const RESIDUAL_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub n: usize,
    pub h: f64,
    pub t_min: f64,
    /// `sup |D^α u - m u - f|` over grid nodes in `[t_min, T]`.
    pub sup_residual: f64,
    pub worst_t: f64,
    /// `sup max(|D^α u|, |m u|, |f|)` over the same nodes.
    pub scale: f64,
    pub rel_residual: f64,
    /// `max(10 h, 1e-3)`, applied to `rel_residual`.
    pub tolerance: f64,
    pub declared_exponent: Option<f64>,
    pub pass: bool,
}

/// Leading small-`t` exponent of `u`, used to declare the singular part to
/// the numerical derivative.
fn leading_exponent(sol: &ScalarSolution) -> Option<f64> {
    let al = sol.eq.alpha;
    let mut e = f64::INFINITY;
    if sol.c2 != 0.0 {
        e = e.min(al - 2.0);
    }
    if sol.c1 != 0.0 {
        e = e.min(al - 1.0);
    }
    if !sol.source.is_zero() {
        e = e.min(al + sol.source.singular_exponent());
    }
    (e.is_finite() && e != 0.0).then_some(e)
}

/// Samples `u` on `grid` and checks `D^α u - m u = f` on `[t_min, T]` with
/// the numerical Riemann-Liouville derivative.
pub fn residual_report(sol: &ScalarSolution, grid: UniformGrid, t_min: f64) -> Result<ResidualReport, SolverError> {
    let h = grid.h();
    if !(t_min >= 2.0 * h - 1e-12 * h) || t_min > grid.t_end {
        return Err(SolverError::invalid(
            ErrorCode::Numerics,
            format!("t_min = {t_min} must lie in [2h, T] = [{}, {}]", 2.0 * h, grid.t_end),
        ));
    }
    let declared = leading_exponent(sol);
    let nodes = grid.nodes();
    let values: Vec<f64> = nodes
        .par_iter()
        .enumerate()
        .map(|(j, &t)| match sol.eval(t) {
            Err(SolverError::SingularAtZero) if j == 0 => Ok(f64::NAN),
            r => r,
        })
        .collect::<Result<_, _>>()?;
    let sampled = SampledFunction::new(grid, values, declared)?;
    let d = rl_derivative2_all(&sampled, sol.eq.alpha)?;

    let k_min = grid.index_at_or_after(t_min).max(1);
    let mut sup = 0.0f64;
    let mut worst_t = nodes[k_min.min(grid.n)];
    let mut scale = 0.0f64;
    for j in k_min..=grid.n {
        let t = nodes[j];
        let u = sampled.values[j];
        let f = sol.source.eval(t);
        let mu = sol.eq.m * u;
        let r = (d[j] - mu - f).abs();
        if !r.is_finite() {
            return Err(SolverError::invalid(ErrorCode::Numerics, format!("non-finite residual at t = {t}")));
        }
        if r > sup {
            sup = r;
            worst_t = t;
        }
        scale = scale.max(d[j].abs()).max(mu.abs()).max(f.abs());
    }
    let rel = if sup == 0.0 { 0.0 } else { sup / scale };
    let tolerance = (10.0 * h).max(1e-3);
    Ok(ResidualReport {
        n: grid.n,
        h,
        t_min,
        sup_residual: sup,
        worst_t,
        scale,
        rel_residual: rel,
        tolerance,
        declared_exponent: declared,
        pass: rel <= tolerance,
    })
}

/// Least-squares slope of `ln|u|` against `ln t` on `[1e-4, 1e-2]`.
pub fn singular_exponent_estimate(sol: &ScalarSolution) -> Result<f64, SolverError> {
    let pts: Vec<(f64, f64)> = (0..=8)
        .map(|k| 10f64.powf(-4.0 + 0.25 * k as f64))
        .map(|t| sol.eval(t).map(|u| (t.ln(), u.abs())))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&(_, u)| u > 0.0 && u.is_finite())
        .map(|(x, u)| (x, u.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(SolverError::Underflow);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Exponents closer than this are merged before fitting.
const MERGE_GAP: f64 = 0.05;
const FIT_T0: f64 = 1e-3;
const MAX_TERMS: usize = 4;

/// `lim_{t→0} v(t)` from samples at `t0 2^{-k}`, assuming
/// `v(t) = c + Σ a_i t^{e_i} + (higher order)`.
fn extrapolate<F>(mut exps: Vec<f64>, v: F) -> Result<f64, SolverError>
where
    F: Fn(f64) -> Result<f64, SolverError>,
{
    exps.retain(|&e| e > 0.0 && e <= 2.0);
    exps.sort_by(|a, b| a.total_cmp(b));
    let mut merged: Vec<f64> = Vec::new();
    for e in exps {
        if merged.last().is_none_or(|&l| e - l > MERGE_GAP) {
            merged.push(e);
        }
    }
    merged.truncate(MAX_TERMS);
    let k = merged.len() + 1;
    // unknowns scaled by t0^{e_i}, so entries are (2^{-j})^{e_i}
    let mut a = vec![vec![0.0; k + 1]; k];
    for (j, row) in a.iter_mut().enumerate() {
        let s = 0.5f64.powi(j as i32);
        row[0] = 1.0;
        for (i, e) in merged.iter().enumerate() {
            row[i + 1] = s.powf(*e);
        }
        row[k] = v(FIT_T0 * s)?;
    }
    Ok(solve_first(a))
}

/// First unknown of an augmented `k × (k+1)` system (partial pivoting).
#[allow(clippy::needless_range_loop)]
fn solve_first(mut a: Vec<Vec<f64>>) -> f64 {
    let k = a.len();
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap_or(c);
        a.swap(c, p);
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            for cc in c..=k {
                a[r][cc] -= f * a[c][cc];
            }
        }
    }
    let mut x = vec![0.0; k];
    for c in (0..k).rev() {
        let s: f64 = (c + 1..k).map(|j| a[c][j] * x[j]).sum();
        x[c] = (a[c][k] - s) / a[c][c];
    }
    x[0]
}

/// Extrapolated initial functionals
/// `(lim Γ(α+β-1) t^{2-α-β} (I^β u)(t), lim (D^{α-1} u)(t))` as `t → 0`.
///
/// For a Cauchy solution these reproduce `(ĉ1, ĉ2)`.
pub fn cauchy_functionals(sol: &ScalarSolution, beta: f64) -> Result<(f64, f64), SolverError> {
    let al = sol.eq.alpha;
    let p = sol.source.singular_exponent();
    let forced = !sol.source.is_zero();
    let mut ei = vec![1.0, al, 2.0 * al, 1.0 + al];
    let mut ed = vec![al - 1.0, 2.0 * al - 1.0, al, 2.0 * al];
    if forced {
        ei.extend([2.0 + p, 2.0 + p + al]);
        ed.extend([1.0 + p, 1.0 + p + al]);
    }
    let g = gamma(al + beta - 1.0);
    let c1 = extrapolate(ei, |t| Ok(g * t.powf(2.0 - al - beta) * sol.ibeta(beta, t)?))?;
    let c2 = extrapolate(ed, |t| sol.dgamma(al - 1.0, t))?;
    Ok((c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{EquationParams, Family, SourceTerm};

    fn sol(alpha: f64, m: f64, c1: f64, c2: f64, f: SourceTerm) -> ScalarSolution {
        ScalarSolution::new(EquationParams::new(alpha, m, 1.0).unwrap(), c1, c2, f, Family::Cauchy)
    }

    #[test]
    fn zero_solution_has_zero_residual() {
        let s = sol(1.5, -1.0, 0.0, 0.0, SourceTerm::Zero);
        let r = residual_report(&s, UniformGrid::new(1.0, 200).unwrap(), 0.05).unwrap();
        assert_eq!(r.sup_residual, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn classical_residual() {
        let s = sol(2.0, -1.0, 0.0, 1.0, SourceTerm::Zero);
        let r = residual_report(&s, UniformGrid::new(1.0, 1000).unwrap(), 0.05).unwrap();
        assert!(r.pass && r.sup_residual < 1e-2, "{r:?}");
    }

    #[test]
    fn fractional_residual_with_source() {
        let s = sol(1.5, -1.0, 0.0, 0.0, SourceTerm::Power { coef: 1.0, p: 1.0 });
        let r = residual_report(&s, UniformGrid::new(1.0, 400).unwrap(), 0.05).unwrap();
        assert!(r.pass, "{r:?}");
        let s = sol(1.5, -1.0, 0.7, -0.4, SourceTerm::Constant { c: 1.0 });
        let r = residual_report(&s, UniformGrid::new(1.0, 400).unwrap(), 0.05).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.declared_exponent, Some(-0.5));
    }

    #[test]
    fn t_min_too_small() {
        let s = sol(1.5, -1.0, 1.0, 0.0, SourceTerm::Zero);
        assert!(residual_report(&s, UniformGrid::new(1.0, 100).unwrap(), 0.01).is_err());
    }

    #[test]
    fn exponent_estimates() {
        let e = singular_exponent_estimate(&sol(1.5, -1.0, 0.0, 1.0, SourceTerm::Zero)).unwrap();
        assert!((e + 0.5).abs() < 0.05, "{e}");
        let e = singular_exponent_estimate(&sol(1.5, -1.0, 1.0, 0.0, SourceTerm::Zero)).unwrap();
        assert!((e - 0.5).abs() < 0.05, "{e}");
        let e = singular_exponent_estimate(&sol(1.5, -1.0, 0.0, 0.0, SourceTerm::Constant { c: 1.0 })).unwrap();
        assert!((e - 1.5).abs() < 0.05, "{e}");
        assert!(matches!(
            singular_exponent_estimate(&sol(1.5, -1.0, 0.0, 0.0, SourceTerm::Zero)),
            Err(SolverError::Underflow)
        ));
    }

    #[test]
    fn functionals_recover_data() {
        for &(alpha, beta) in &[(1.25, 0.5), (1.5, 0.0), (1.5, 0.5), (1.75, 0.1), (2.0, 0.0)] {
            let s = sol(alpha, -2.0, 0.3, 1.1, SourceTerm::Exp { coef: 1.0, k: 0.5 });
            let (c1, c2) = cauchy_functionals(&s, beta).unwrap();
            assert!((c1 - 1.1).abs() < 1e-4, "alpha={alpha} beta={beta}: {c1}");
            assert!((c2 - 0.3).abs() < 1e-4, "alpha={alpha} beta={beta}: {c2}");
        }
    }
}
