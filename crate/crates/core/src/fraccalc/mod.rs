//! Numerical Riemann-Liouville operators on uniformly sampled data.
//!
//! The integral is product integration: the kernel `(t-s)^{β-1}` (and, when a
//! singular exponent `p` is declared, the factor `s^p`) is integrated exactly
//! or to quadrature precision on every cell, with the remaining data treated
//! as piecewise linear. Derivatives difference the integral of the
//! complementary order.

mod grunwald;
mod weights;

use rayon::prelude::*;
use serde::Serialize;

pub use grunwald::gl_derivative;

use crate::special::recip_gamma;
use weights::{trapezoid_weights, PowerMoments};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FracCalcError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite sample at index {0} with no declared singular exponent")]
    SingularInput(usize),
    #[error("output index {index} is too close to t = 0 (need at least {min})")]
    NearBoundary { index: usize, min: usize },
    #[error("output index {index} outside grid with {n} intervals")]
    OutOfGrid { index: usize, n: usize },
}

/// Uniform grid `t_j = j h`, `j = 0..=n`, `h = t_end / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    pub t_end: f64,
    pub n: usize,
}

impl UniformGrid {
    pub fn new(t_end: f64, n: usize) -> Result<Self, FracCalcError> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(FracCalcError::Domain(format!("t_end = {t_end} must be positive")));
        }
        if n < 2 {
            return Err(FracCalcError::Domain(format!("grid needs n >= 2 intervals, got {n}")));
        }
        Ok(UniformGrid { t_end, n })
    }

    pub fn h(&self) -> f64 {
        self.t_end / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.n {
            self.t_end
        } else {
            j as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.node(j)).collect()
    }

    /// First index with `t_j >= t`.
    pub fn index_at_or_after(&self, t: f64) -> usize {
        ((t / self.h()) - 1e-9).ceil().max(0.0) as usize
    }
}

/// Samples `f(t_j)` on a grid. With `singular_exponent = Some(p)` the data are
/// read as `f(t) = t^p g(t)` with `g` continuous; `values[0]` may then be
/// non-finite.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub grid: UniformGrid,
    pub values: Vec<f64>,
    pub singular_exponent: Option<f64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<f64>, singular_exponent: Option<f64>) -> Result<Self, FracCalcError> {
        if values.len() != grid.n + 1 {
            return Err(FracCalcError::Domain(format!(
                "{} samples for a grid with {} nodes",
                values.len(),
                grid.n + 1
            )));
        }
        if let Some(p) = singular_exponent {
            if !(p > -1.0) {
                return Err(FracCalcError::Domain(format!("singular exponent {p} must exceed -1")));
            }
        }
        if let Some(i) = values.iter().skip(1).position(|v| !v.is_finite()) {
            return Err(FracCalcError::SingularInput(i + 1));
        }
        if !values[0].is_finite() && singular_exponent.is_none() {
            return Err(FracCalcError::SingularInput(0));
        }
        Ok(SampledFunction { grid, values, singular_exponent })
    }

    /// Samples `f` at the nodes; `f(0)` is skipped (NaN) when a negative exponent is declared.
    pub fn from_fn<F: Fn(f64) -> f64>(grid: UniformGrid, f: F, singular_exponent: Option<f64>) -> Result<Self, FracCalcError> {
        let values = (0..=grid.n)
            .map(|j| {
                if j == 0 && singular_exponent.is_some_and(|p| p < 0.0) {
                    f64::NAN
                } else {
                    f(grid.node(j))
                }
            })
            .collect();
        SampledFunction::new(grid, values, singular_exponent)
    }

    fn declared(&self) -> Option<f64> {
        self.singular_exponent.filter(|&p| p != 0.0)
    }

    /// `g_j = f_j / t_j^p`, with `g_0` extrapolated linearly.
    fn regular_part(&self, p: f64) -> Vec<f64> {
        let mut g: Vec<f64> = (0..=self.grid.n)
            .map(|j| if j == 0 { 0.0 } else { self.values[j] / self.grid.node(j).powf(p) })
            .collect();
        g[0] = 2.0 * g[1] - g[2];
        g
    }
}

fn check_order(name: &str, v: f64) -> Result<(), FracCalcError> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(FracCalcError::Domain(format!("{name} = {v} outside (0, 1]")));
    }
    Ok(())
}

/// Integration engine for a fixed data set and order; `order = 0` is the identity.
struct Integrator<'a> {
    f: &'a SampledFunction,
    order: f64,
    g: Option<(f64, Vec<f64>)>,
    moments: PowerMoments,
}

impl<'a> Integrator<'a> {
    fn new(f: &'a SampledFunction, order: f64) -> Self {
        let g = f.declared().map(|p| (p, f.regular_part(p)));
        Integrator { f, order, g, moments: PowerMoments::new() }
    }

    fn at(&self, n: usize, cells: &mut Vec<(f64, f64)>) -> f64 {
        if self.order == 0.0 {
            return self.f.values[n];
        }
        if n == 0 {
            return 0.0;
        }
        let h = self.f.grid.h();
        match &self.g {
            None => {
                let w = trapezoid_weights(n, self.order, h);
                w.iter().zip(&self.f.values[..=n]).map(|(w, v)| w * v).sum()
            }
            Some((p, g)) => {
                self.moments.cells(n, *p, self.order, cells);
                let s: f64 = cells
                    .iter()
                    .enumerate()
                    .map(|(j, (a, b))| a * g[j] + b * g[j + 1])
                    .sum();
                s * h.powf(p + self.order) * recip_gamma(self.order)
            }
        }
    }

    fn all(&self) -> Vec<f64> {
        (0..=self.f.grid.n)
            .into_par_iter()
            .map_init(Vec::new, |cells, n| self.at(n, cells))
            .collect()
    }

    fn range(&self, lo: usize, hi: usize) -> Vec<f64> {
        let mut cells = Vec::new();
        (lo..=hi).map(|n| self.at(n, &mut cells)).collect()
    }
}

fn check_index(f: &SampledFunction, index: usize) -> Result<(), FracCalcError> {
    if index > f.grid.n {
        return Err(FracCalcError::OutOfGrid { index, n: f.grid.n });
    }
    Ok(())
}

fn min_index(f: &SampledFunction, base: usize) -> usize {
    if f.singular_exponent.is_some_and(|p| p < 0.0) {
        base.max(3)
    } else {
        base
    }
}

/// `(I^β f)(t_k)`, `0 < β <= 1`.
pub fn rl_integral_num(f: &SampledFunction, beta: f64, out_index: usize) -> Result<f64, FracCalcError> {
    check_order("beta", beta)?;
    check_index(f, out_index)?;
    Ok(Integrator::new(f, beta).at(out_index, &mut Vec::new()))
}

/// `(I^β f)(t_k)` at every node.
pub fn rl_integral_all(f: &SampledFunction, beta: f64) -> Result<Vec<f64>, FracCalcError> {
    check_order("beta", beta)?;
    Ok(Integrator::new(f, beta).all())
}

/// First derivative of the samples `v` at `k`: central, or one-sided at the right end.
fn first_diff(v: &[f64], k: usize, n: usize, h: f64) -> f64 {
    if k < n {
        (v[k + 1] - v[k - 1]) / (2.0 * h)
    } else {
        (3.0 * v[k] - 4.0 * v[k - 1] + v[k - 2]) / (2.0 * h)
    }
}

/// Second derivative of the samples `v` at `k`.
fn second_diff(v: &[f64], k: usize, n: usize, h: f64) -> f64 {
    if k < n {
        (v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h)
    } else {
        (2.0 * v[k] - 5.0 * v[k - 1] + 4.0 * v[k - 2] - v[k - 3]) / (h * h)
    }
}

/// `(D^γ f)(t_k) = d/dt (I^{1-γ} f)(t_k)`, `0 < γ <= 1`.
pub fn rl_derivative_num(f: &SampledFunction, gamma: f64, out_index: usize) -> Result<f64, FracCalcError> {
    check_order("gamma", gamma)?;
    check_index(f, out_index)?;
    let min = min_index(f, 1).max(if out_index == f.grid.n { 2 } else { 1 });
    if out_index < min {
        return Err(FracCalcError::NearBoundary { index: out_index, min });
    }
    let n = f.grid.n;
    let (lo, hi) = if out_index < n { (out_index - 1, out_index + 1) } else { (n - 2, n) };
    let vals = Integrator::new(f, 1.0 - gamma).range(lo, hi);
    let mut full = vec![0.0; n + 1];
    full[lo..=hi].copy_from_slice(&vals);
    Ok(first_diff(&full, out_index, n, f.grid.h()))
}

/// `D^γ f` at every node from `first` on; earlier entries are NaN.
pub fn rl_derivative_all(f: &SampledFunction, gamma: f64) -> Result<Vec<f64>, FracCalcError> {
    check_order("gamma", gamma)?;
    let n = f.grid.n;
    let first = min_index(f, 1);
    let i = Integrator::new(f, 1.0 - gamma).all();
    let h = f.grid.h();
    Ok((0..=n)
        .map(|k| if k < first { f64::NAN } else { first_diff(&i, k, n, h) })
        .collect())
}

fn check_alpha(alpha: f64) -> Result<(), FracCalcError> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(FracCalcError::Domain(format!("alpha = {alpha} outside (1, 2]")));
    }
    Ok(())
}

/// `(D^α f)(t_k) = d²/dt² (I^{2-α} f)(t_k)`, `1 < α <= 2`.
pub fn rl_derivative2_num(f: &SampledFunction, alpha: f64, out_index: usize) -> Result<f64, FracCalcError> {
    check_alpha(alpha)?;
    check_index(f, out_index)?;
    let min = min_index(f, 2);
    if out_index < min {
        return Err(FracCalcError::NearBoundary { index: out_index, min });
    }
    let n = f.grid.n;
    let (lo, hi) = if out_index < n { (out_index - 1, out_index + 1) } else { (n - 3, n) };
    let vals = Integrator::new(f, 2.0 - alpha).range(lo, hi);
    let mut full = vec![0.0; n + 1];
    full[lo..=hi].copy_from_slice(&vals);
    Ok(second_diff(&full, out_index, n, f.grid.h()))
}

/// `D^α f` at every node; the nodes too close to 0 are NaN.
pub fn rl_derivative2_all(f: &SampledFunction, alpha: f64) -> Result<Vec<f64>, FracCalcError> {
    check_alpha(alpha)?;
    let n = f.grid.n;
    let first = min_index(f, 2);
    let i = Integrator::new(f, 2.0 - alpha).all();
    let h = f.grid.h();
    Ok((0..=n)
        .map(|k| if k < first { f64::NAN } else { second_diff(&i, k, n, h) })
        .collect())
}
