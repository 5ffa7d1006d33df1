use std::f64::consts::PI;

use crate::quad::{GaussLegendre, Rule};

/// Self-adjoint operator with positive discrete spectrum on an interval.
///
/// Modes are indexed from 1. Eigenfunctions are orthonormal in `L²` of the
/// domain, so `(g, e_ξ)` is computed with [`SpectrumProvider::quadrature`].
pub trait SpectrumProvider: Send + Sync {
    fn eigenvalue(&self, xi: usize) -> f64;
    fn eigenfunction(&self, xi: usize, x: f64) -> f64;
    fn domain(&self) -> (f64, f64);
    /// Spatial rule fine enough to resolve modes `1..=n_modes`.
    fn quadrature(&self, n_modes: usize) -> Rule;
    /// Largest mode index available (`usize::MAX` when unbounded).
    fn max_modes(&self) -> usize {
        usize::MAX
    }
}

/// `-d²/dx²` on `(0, L)` with Dirichlet ends: `m_ξ = (ξπ/L)²`,
/// `e_ξ = √(2/L) sin(ξπx/L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletLaplacian {
    pub length: f64,
}

/// Gauss points per panel in spatial rules.
const SPATIAL_POINTS: usize = 8;

impl DirichletLaplacian {
    pub fn new(length: f64) -> Self {
        assert!(length > 0.0, "domain length must be positive");
        DirichletLaplacian { length }
    }
}

impl SpectrumProvider for DirichletLaplacian {
    fn eigenvalue(&self, xi: usize) -> f64 {
        let k = xi as f64 * PI / self.length;
        k * k
    }

    fn eigenfunction(&self, xi: usize, x: f64) -> f64 {
        (2.0 / self.length).sqrt() * (xi as f64 * PI * x / self.length).sin()
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.length)
    }

    /// Composite Gauss-Legendre, two 8-point panels per half-wavelength of the top mode.
    fn quadrature(&self, n_modes: usize) -> Rule {
        composite_rule(0.0, self.length, 4 * n_modes.max(8))
    }
}

pub(crate) fn composite_rule(a: f64, b: f64, panels: usize) -> Rule {
    let gl = GaussLegendre::new(SPATIAL_POINTS);
    let h = (b - a) / panels as f64;
    let mut rule = Rule::default();
    for j in 0..panels {
        let lo = a + j as f64 * h;
        for (x, w) in gl.mapped(lo, lo + h) {
            rule.nodes.push(x);
            rule.weights.push(w);
        }
    }
    rule
}

/// User spectrum: eigenvalues, eigenfunction samples at the nodes of a
/// spatial rule, and the rule itself. Off-node eigenfunction values are
/// linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    pub eigenvalues: Vec<f64>,
    pub rule_nodes: Vec<f64>,
    pub rule_weights: Vec<f64>,
    /// `modes[ξ-1][i] = e_ξ(rule_nodes[i])`.
    pub modes: Vec<Vec<f64>>,
    pub domain: (f64, f64),
}

impl TabulatedSpectrum {
    pub fn validate(&self) -> Result<(), String> {
        let n = self.rule_nodes.len();
        if n < 2 || self.rule_weights.len() != n {
            return Err("rule needs matching nodes and weights (at least 2)".into());
        }
        if self.rule_nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err("rule nodes must be strictly increasing".into());
        }
        if self.modes.len() != self.eigenvalues.len() || self.modes.iter().any(|m| m.len() != n) {
            return Err("one eigenfunction sample row per eigenvalue, one entry per node".into());
        }
        if self.eigenvalues.iter().any(|&m| !(m > 0.0)) {
            return Err("eigenvalues must be positive".into());
        }
        Ok(())
    }
}

impl SpectrumProvider for TabulatedSpectrum {
    fn eigenvalue(&self, xi: usize) -> f64 {
        self.eigenvalues[xi - 1]
    }

    fn eigenfunction(&self, xi: usize, x: f64) -> f64 {
        let row = &self.modes[xi - 1];
        let xs = &self.rule_nodes;
        let last = xs.len() - 1;
        if x <= xs[0] {
            return row[0];
        }
        if x >= xs[last] {
            return row[last];
        }
        let i = xs.partition_point(|&v| v <= x) - 1;
        let w = (x - xs[i]) / (xs[i + 1] - xs[i]);
        row[i] + w * (row[i + 1] - row[i])
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn quadrature(&self, _n_modes: usize) -> Rule {
        Rule { nodes: self.rule_nodes.clone(), weights: self.rule_weights.clone() }
    }

    fn max_modes(&self) -> usize {
        self.eigenvalues.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_modes_are_orthonormal() {
        let sp = DirichletLaplacian::new(PI);
        let rule = sp.quadrature(16);
        for i in 1..=16 {
            for j in 1..=16 {
                let ip = rule.apply(|x| sp.eigenfunction(i, x) * sp.eigenfunction(j, x));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-13, "({i},{j}) {ip}");
            }
        }
        assert!((sp.eigenvalue(3) - 9.0).abs() < 1e-13);
    }

    #[test]
    fn tabulated_matches_dirichlet_on_nodes() {
        let sp = DirichletLaplacian::new(2.0);
        let rule = sp.quadrature(4);
        let tab = TabulatedSpectrum {
            eigenvalues: (1..=4).map(|k| sp.eigenvalue(k)).collect(),
            modes: (1..=4).map(|k| rule.nodes.iter().map(|&x| sp.eigenfunction(k, x)).collect()).collect(),
            rule_nodes: rule.nodes.clone(),
            rule_weights: rule.weights.clone(),
            domain: (0.0, 2.0),
        };
        assert!(tab.validate().is_ok());
        let x = rule.nodes[5];
        assert_eq!(tab.eigenfunction(2, x), sp.eigenfunction(2, x));
        assert_eq!(tab.max_modes(), 4);
    }
}
