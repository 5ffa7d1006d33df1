//! Source terms `f(t)` from a closed registry.

use serde::{Deserialize, Serialize};

use super::{ErrorCode, SolverError};
use crate::fraccalc::SampledFunction;

/// `f(t)` on `[0, T]`. Every variant is `t^p · (smooth)` for a known `p > -1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceTerm {
    #[default]
    Zero,
    /// `c`
    Constant { c: f64 },
    /// `coef · t^p`, `p > -1`
    Power { coef: f64, p: f64 },
    /// `coef · e^{k t}`
    Exp { coef: f64, k: f64 },
    /// Piecewise-linear interpolation of `(t_i, f_i)`; constant beyond the ends.
    Table { t: Vec<f64>, f: Vec<f64> },
    /// Sum of terms.
    Sum { terms: Vec<SourceTerm> },
}

impl SourceTerm {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: String| Err(SolverError::invalid(ErrorCode::Source, msg));
        match self {
            SourceTerm::Zero => Ok(()),
            SourceTerm::Constant { c } if !c.is_finite() => bad(format!("constant {c} is not finite")),
            SourceTerm::Constant { .. } => Ok(()),
            SourceTerm::Power { coef, p } => {
                if !coef.is_finite() || !(*p > -1.0) || !p.is_finite() {
                    return bad(format!("power source needs finite coef and p > -1, got coef={coef}, p={p}"));
                }
                Ok(())
            }
            SourceTerm::Exp { coef, k } => {
                if !coef.is_finite() || !k.is_finite() {
                    return bad(format!("exp source needs finite coef and k, got coef={coef}, k={k}"));
                }
                Ok(())
            }
            SourceTerm::Table { t, f } => {
                if t.len() != f.len() || t.len() < 2 {
                    return bad(format!("table needs matching t/f columns with >= 2 rows, got {}/{}", t.len(), f.len()));
                }
                if t.windows(2).any(|w| !(w[1] > w[0])) || t.iter().chain(f).any(|v| !v.is_finite()) {
                    return bad("table abscissae must be finite and strictly increasing".into());
                }
                Ok(())
            }
            SourceTerm::Sum { terms } => terms.iter().try_for_each(|s| s.validate()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SourceTerm::Zero => true,
            SourceTerm::Constant { c } => *c == 0.0,
            SourceTerm::Power { coef, .. } | SourceTerm::Exp { coef, .. } => *coef == 0.0,
            SourceTerm::Table { f, .. } => f.iter().all(|v| *v == 0.0),
            SourceTerm::Sum { terms } => terms.iter().all(|s| s.is_zero()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            SourceTerm::Zero => 0.0,
            SourceTerm::Constant { c } => *c,
            SourceTerm::Power { coef, p } => coef * t.powf(*p),
            SourceTerm::Exp { coef, k } => coef * (k * t).exp(),
            SourceTerm::Table { t: ts, f } => interp(ts, f, t),
            SourceTerm::Sum { terms } => terms.iter().map(|s| s.eval(t)).sum(),
        }
    }

    /// Exponent `p` with `f(t) = t^p g(t)`, `g` continuous at 0 (the smallest over a sum).
    pub fn singular_exponent(&self) -> f64 {
        match self {
            SourceTerm::Power { p, coef } if *coef != 0.0 => *p,
            SourceTerm::Sum { terms } => terms
                .iter()
                .filter(|s| !s.is_zero())
                .map(|s| s.singular_exponent())
                .fold(f64::INFINITY, f64::min)
                .min(0.0),
            _ => 0.0,
        }
    }

    /// The summands, flattened; a non-sum term is its own single summand.
    pub fn components(&self) -> Vec<&SourceTerm> {
        match self {
            SourceTerm::Sum { terms } => terms.iter().flat_map(|s| s.components()).collect(),
            SourceTerm::Zero => Vec::new(),
            other => vec![other],
        }
    }

    /// `f(x) / x^p` for a single component with exponent `p`.
    pub(crate) fn regular_part(&self, x: f64) -> f64 {
        match self {
            SourceTerm::Power { coef, .. } => *coef,
            other => other.eval(x),
        }
    }

    /// Number of interior kinks (table breakpoints), used to size quadrature.
    pub(crate) fn kinks(&self) -> usize {
        match self {
            SourceTerm::Table { t, .. } => t.len(),
            SourceTerm::Sum { terms } => terms.iter().map(|s| s.kinks()).sum(),
            _ => 0,
        }
    }

    pub fn scaled(&self, s: f64) -> SourceTerm {
        match self {
            SourceTerm::Zero => SourceTerm::Zero,
            SourceTerm::Constant { c } => SourceTerm::Constant { c: c * s },
            SourceTerm::Power { coef, p } => SourceTerm::Power { coef: coef * s, p: *p },
            SourceTerm::Exp { coef, k } => SourceTerm::Exp { coef: coef * s, k: *k },
            SourceTerm::Table { t, f } => SourceTerm::Table { t: t.clone(), f: f.iter().map(|v| v * s).collect() },
            SourceTerm::Sum { terms } => SourceTerm::Sum { terms: terms.iter().map(|x| x.scaled(s)).collect() },
        }
    }

    /// Table source from grid samples (a non-finite first sample is dropped).
    pub fn from_sampled(f: &SampledFunction) -> SourceTerm {
        let nodes = f.grid.nodes();
        let (t, v): (Vec<f64>, Vec<f64>) = nodes
            .into_iter()
            .zip(f.values.iter().copied())
            .filter(|(_, v)| v.is_finite())
            .unzip();
        SourceTerm::Table { t, f: v }
    }
}

fn interp(ts: &[f64], fs: &[f64], t: f64) -> f64 {
    if t <= ts[0] {
        return fs[0];
    }
    let last = ts.len() - 1;
    if t >= ts[last] {
        return fs[last];
    }
    let i = ts.partition_point(|&x| x <= t) - 1;
    let w = (t - ts[i]) / (ts[i + 1] - ts[i]);
    fs[i] + w * (fs[i + 1] - fs[i])
}
