use serde::{Deserialize, Serialize};

use super::{ErrorCode, EquationParams, SolverError, SourceTerm, EDGE_TOL};
use crate::quad::endpoint_rule;
use crate::special::{gamma, recip_gamma, MittagLeffler, SpecialError};

/// Default node budget for source-moment quadrature.
pub const DEFAULT_QUAD_N: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cauchy,
    Inner,
    InnerBoundary,
}

fn is_nonpositive_int(b: f64) -> bool {
    b <= 0.0 && b == b.trunc()
}

/// `t^e E_{α,b}(m t^α)`, with the `t → 0` limit taken when it exists.
fn power_ml(eq: &EquationParams, t: f64, e: f64, b: f64) -> Result<f64, SolverError> {
    if t == 0.0 {
        if e > 0.0 {
            return Ok(0.0);
        }
        if is_nonpositive_int(b) {
            // E_{α,b}(z) = z E_{α,b+α}(z)
            return Ok(eq.m * power_ml(eq, t, e + eq.alpha, b + eq.alpha)?);
        }
        if e == 0.0 {
            return Ok(recip_gamma(b));
        }
        return Err(SolverError::SingularAtZero);
    }
    let e_val = MittagLeffler::shared(eq.alpha, b)?.eval(eq.m * t.powf(eq.alpha))?.value;
    Ok(t.powf(e) * e_val)
}

/// `t^{α-1} E_{α,α}(m t^α)`.
pub fn basis1(eq: &EquationParams, t: f64) -> Result<f64, SolverError> {
    power_ml(eq, t, eq.alpha - 1.0, eq.alpha)
}

/// `t^{α-2} E_{α,α-1}(m t^α)`; unbounded at `t = 0` unless `α = 2`.
pub fn basis2(eq: &EquationParams, t: f64) -> Result<f64, SolverError> {
    power_ml(eq, t, eq.alpha - 2.0, eq.alpha - 1.0)
}

/// `∫_0^t f(t-s) s^{b-1} E_{α,b}(m s^α) ds`.
///
/// Constant and power components use the closed form. Any other component
/// `f = x^p g(x)` gets a rule that carries `s^{b-1}`
/// and `(t-s)^p` in its weights, so only `g` and the Mittag-Leffler factor are
/// sampled.
pub fn source_moment(eq: &EquationParams, f: &SourceTerm, b: f64, t: f64, quad_n: usize) -> Result<f64, SolverError> {
    if t < 0.0 {
        return Err(SolverError::invalid(ErrorCode::Numerics, format!("t = {t} is negative")));
    }
    if t == 0.0 || f.is_zero() {
        return Ok(0.0);
    }
    if b <= 0.0 {
        return Err(SolverError::invalid(ErrorCode::Numerics, format!("moment order {b} must be positive")));
    }
    let ml = MittagLeffler::shared(eq.alpha, b)?;
    let omega = eq.m.abs().powf(1.0 / eq.alpha);
    let min_panels = ((omega * t).ceil() as usize).max(f.kinks()).min(1 << 16);

    // x^p components: ∫_0^t (t-s)^p s^{b-1} E_{α,b}(m s^α) ds = Γ(p+1) t^{b+p} E_{α,b+p+1}(m t^α)
    let mut total = 0.0;
    let mut comps = Vec::new();
    for c in f.components() {
        match *c {
            SourceTerm::Constant { c } => total += c * power_ml(eq, t, b, b + 1.0)?,
            SourceTerm::Power { coef, p } => total += coef * gamma(p + 1.0) * power_ml(eq, t, b + p, b + p + 1.0)?,
            _ => comps.push(c),
        }
    }
    let mut exps: Vec<f64> = comps.iter().map(|c| c.singular_exponent()).collect();
    exps.sort_by(|x, y| x.total_cmp(y));
    exps.dedup();

    for p in exps {
        let group: Vec<&SourceTerm> = comps.iter().copied().filter(|c| c.singular_exponent() == p).collect();
        let rule = endpoint_rule(t, b - 1.0, p, quad_n, min_panels);
        total += rule.apply(|s| {
            let g: f64 = group.iter().map(|c| c.regular_part(t - s)).sum();
            if g == 0.0 {
                0.0
            } else {
                g * ml.value(eq.m * s.powf(eq.alpha))
            }
        });
    }
    if !total.is_finite() {
        return Err(SpecialError::Overflow { alpha: eq.alpha, beta: b, z: eq.m * t.powf(eq.alpha) }.into());
    }
    Ok(total)
}

/// `∫_0^t (t-s)^{α-1} E_{α,α}(m (t-s)^α) f(s) ds`.
pub fn duhamel(eq: &EquationParams, f: &SourceTerm, t: f64, quad_n: usize) -> Result<f64, SolverError> {
    if quad_n < 8 {
        return Err(SolverError::invalid(ErrorCode::Numerics, format!("quad_n = {quad_n} must be at least 8")));
    }
    source_moment(eq, f, eq.alpha, t, quad_n)
}

/// `u = C1 t^{α-1}E_{α,α} + C2 t^{α-2}E_{α,α-1} + (Duhamel term)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSolution {
    pub eq: EquationParams,
    pub c1: f64,
    pub c2: f64,
    pub source: SourceTerm,
    pub family: Family,
    pub quad_n: usize,
}

/// JSON form of a [`ScalarSolution`].
#[derive(Debug, Clone, Serialize)]
pub struct SolutionRecord<'a> {
    pub family: Family,
    pub alpha: f64,
    pub m: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
    pub source: &'a SourceTerm,
}

impl ScalarSolution {
    pub fn new(eq: EquationParams, c1: f64, c2: f64, source: SourceTerm, family: Family) -> Self {
        ScalarSolution { eq, c1, c2, source, family, quad_n: DEFAULT_QUAD_N }
    }

    pub fn with_quad_n(mut self, quad_n: usize) -> Self {
        self.quad_n = quad_n.max(8);
        self
    }

    pub fn record(&self) -> SolutionRecord<'_> {
        SolutionRecord {
            family: self.family,
            alpha: self.eq.alpha,
            m: self.eq.m,
            c1: self.c1,
            c2: self.c2,
            source: &self.source,
        }
    }

    /// `C1 t^{e1} E_{α,b}(m t^α) + C2 t^{e1-1} E_{α,b-1}(m t^α)` with `e1 = b - 1`.
    fn homogeneous_shifted(&self, t: f64, b: f64) -> Result<f64, SolverError> {
        let mut v = 0.0;
        if self.c1 != 0.0 {
            v += self.c1 * power_ml(&self.eq, t, b - 1.0, b)?;
        }
        if self.c2 != 0.0 {
            v += self.c2 * power_ml(&self.eq, t, b - 2.0, b - 1.0)?;
        }
        Ok(v)
    }

    fn check_t(&self, t: f64) -> Result<(), SolverError> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(SolverError::invalid(ErrorCode::Numerics, format!("t = {t} must be finite and >= 0")));
        }
        Ok(())
    }

    /// `u(t)`.
    pub fn eval(&self, t: f64) -> Result<f64, SolverError> {
        self.check_t(t)?;
        let b = self.eq.alpha;
        Ok(self.homogeneous_shifted(t, b)? + source_moment(&self.eq, &self.source, b, t, self.quad_n)?)
    }

    /// `(I^β u)(t)`, `0 ≤ β ≤ 1`; `β = 0` is `u(t)`.
    pub fn ibeta(&self, beta: f64, t: f64) -> Result<f64, SolverError> {
        self.check_t(t)?;
        if !(0.0..=1.0).contains(&beta) {
            return Err(SolverError::invalid(ErrorCode::BetaRange, format!("beta = {beta} must lie in [0, 1]")));
        }
        let b = self.eq.alpha + beta;
        Ok(self.homogeneous_shifted(t, b)? + source_moment(&self.eq, &self.source, b, t, self.quad_n)?)
    }

    /// `(D^γ u)(t)`, `0 < γ ≤ α-1`.
    pub fn dgamma(&self, gamma: f64, t: f64) -> Result<f64, SolverError> {
        self.check_t(t)?;
        let alpha = self.eq.alpha;
        if !(gamma > 0.0 && gamma <= alpha - 1.0 + EDGE_TOL) {
            return Err(SolverError::invalid(
                ErrorCode::GammaRange,
                format!("gamma = {gamma} must lie in (0, alpha - 1]"),
            ));
        }
        let b = if (gamma - (alpha - 1.0)).abs() <= EDGE_TOL { 1.0 } else { alpha - gamma };
        Ok(self.homogeneous_shifted(t, b)? + source_moment(&self.eq, &self.source, b, t, self.quad_n)?)
    }

    /// The `C2` contribution to `D^{α-1} u` by its two closed forms:
    /// `t^{-1} E_{α,0}(m t^α)` and `m t^{α-1} E_{α,α}(m t^α)` (times `C2`).
    pub fn dgamma_critical_paths(&self, t: f64) -> Result<(f64, f64), SolverError> {
        self.check_t(t)?;
        let via_e0 = power_ml(&self.eq, t, -1.0, 0.0)?;
        let via_ea = self.eq.m * basis1(&self.eq, t)?;
        Ok((self.c2 * via_e0, self.c2 * via_ea))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn eq(alpha: f64, m: f64) -> EquationParams {
        EquationParams::new(alpha, m, 10.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    // mpmath references
    const E_15_25_M1: f64 = 0.603370634681911915508388;
    const E_15_20_M1: f64 = 0.7374822479018947141752761;
    const E_15_15_M1: f64 = 0.7065280370641757942561378;

    #[test]
    fn bases() {
        let e2 = eq(2.0, -1.0);
        assert!(close(basis1(&e2, PI / 2.0).unwrap(), 1.0, 1e-14));
        assert_eq!(basis1(&eq(1.5, -1.0), 0.0).unwrap(), 0.0);
        assert!(close(basis1(&eq(1.5, -1.0), 1.0).unwrap(), E_15_15_M1, 1e-14));
        assert!(close(basis2(&e2, PI).unwrap(), -1.0, 1e-14));
        assert_eq!(basis2(&e2, 0.0).unwrap(), 1.0);
        let want = 10.0 / PI.sqrt();
        assert!(close(basis2(&eq(1.5, 0.0), 0.01).unwrap(), want, 1e-14));
        assert!(matches!(basis2(&eq(1.5, -1.0), 0.0), Err(SolverError::SingularAtZero)));
    }

    #[test]
    fn duhamel_cases() {
        let one = SourceTerm::Constant { c: 1.0 };
        assert_eq!(duhamel(&eq(1.5, -1.0), &SourceTerm::Zero, 0.7, 512).unwrap(), 0.0);
        assert!(close(duhamel(&eq(2.0, -1.0), &one, PI, 512).unwrap(), 2.0, 1e-13));
        assert!(close(duhamel(&eq(1.5, -1.0), &one, 1.0, 512).unwrap(), E_15_25_M1, 1e-13));
        assert!(duhamel(&eq(1.5, -1.0), &one, 1.0, 4).is_err());
    }

    #[test]
    fn duhamel_with_singular_source() {
        // f = t^{-1/2}, m = 0: ∫ (t-s)^{α-1}/Γ(α) s^{-1/2} ds = t^{α-1/2} Γ(1/2)/Γ(α+1/2)
        let e = eq(1.5, 0.0);
        let f = SourceTerm::Power { coef: 1.0, p: -0.5 };
        let t: f64 = 0.8;
        let want = t.powf(1.0) * crate::special::gamma(0.5) / crate::special::gamma(2.0);
        assert!(close(duhamel(&e, &f, t, 512).unwrap(), want, 1e-13));
    }

    #[test]
    fn operators_of_solution() {
        let e2 = eq(2.0, -1.0);
        let cos_sol = ScalarSolution::new(e2, 0.0, 1.0, SourceTerm::Zero, Family::Cauchy);
        assert!(close(cos_sol.ibeta(0.0, PI / 3.0).unwrap(), 0.5, 1e-14));
        assert!(close(cos_sol.dgamma(1.0, PI / 2.0).unwrap(), -1.0, 1e-14));
        let sin_sol = ScalarSolution::new(e2, 1.0, 0.0, SourceTerm::Zero, Family::Cauchy);
        assert!(close(sin_sol.dgamma(1.0, PI).unwrap(), -1.0, 1e-14));

        let s = ScalarSolution::new(eq(1.5, -1.0), 1.0, 0.0, SourceTerm::Zero, Family::Cauchy);
        assert!(close(s.ibeta(0.5, 1.0).unwrap(), E_15_20_M1, 1e-14));
        let f = ScalarSolution::new(eq(1.5, -1.0), 0.3, -0.2, SourceTerm::Exp { coef: 1.0, k: -1.0 }, Family::Cauchy);
        assert!(close(f.ibeta(0.0, 0.6).unwrap(), f.eval(0.6).unwrap(), 1e-15));

        let c2 = ScalarSolution::new(eq(1.5, -1.0), 0.0, 1.0, SourceTerm::Zero, Family::Cauchy);
        assert!(close(c2.dgamma(0.5, 1.0).unwrap(), -E_15_15_M1, 1e-14));
        let (a, b) = c2.dgamma_critical_paths(1.0).unwrap();
        assert!(close(a, b, 1e-14));
        assert!(matches!(
            c2.dgamma(0.6, 1.0),
            Err(SolverError::Invalid { code: ErrorCode::GammaRange, .. })
        ));
    }

    #[test]
    fn record_json() {
        let s = ScalarSolution::new(eq(1.5, -1.0), 0.25, 1.0, SourceTerm::Zero, Family::InnerBoundary);
        let j = serde_json::to_string(&s.record()).unwrap();
        assert_eq!(j, r#"{"family":"inner_boundary","alpha":1.5,"m":-1.0,"C1":0.25,"C2":1.0,"source":{"kind":"zero"}}"#);
    }
}
