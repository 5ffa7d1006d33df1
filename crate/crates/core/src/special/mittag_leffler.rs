//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ z^k / Γ(αk + β)` for
//! real `z`, `0 < α <= 2`.
//!
//! Regimes, keyed on `r = |z|^{1/α}`:
//! * `z >= 0`: power series, in log space once the terms get large;
//! * `z < 0`, `r <= 1`: power series in double precision;
//! * `z < 0`, moderate `r`: power series in double-double, which absorbs the
//!   cancellation between terms of size `~e^r`;
//! * `z < 0`, large `r`: exponential residues plus the algebraic expansion
//!   `-Σ z^{-k} / Γ(β - αk)`, truncated at its smallest term.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use super::dd::{recip_gamma_dd, Dd};
use super::gamma::{gamma_sign, ln_gamma, recip_gamma, sin_pi};
use super::SpecialError;

/// Largest `r` for which the double-double series is still considered.
const R_DD_MAX: f64 = 45.0;
/// Below this `r` the asymptotic expansion is never tried.
const R_ASYM_MIN: f64 = 8.0;
/// Coefficients are tabulated while `αk + β` stays below this.
const TABLE_ARG_MAX: f64 = 205.0;
/// Switch to log-space terms for positive `z` beyond this `r`.
const R_POS_LOG: f64 = 20.0;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MlMethod {
    /// Power series in double precision.
    Series,
    /// Power series in double-double precision.
    SeriesExtended,
    /// Residues plus algebraic asymptotic expansion.
    Asymptotic,
    /// `E_{α,β}(z) = z^k E_{α,β+kα}(z)` for `β ∈ {0, -1, -2, ...}`.
    RecurrenceReduced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlQuery {
    pub alpha: f64,
    pub beta: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MlResult {
    pub value: f64,
    pub method: MlMethod,
    pub est_abs_error: f64,
}

/// Evaluator for fixed `(α, β)` with a precomputed coefficient table.
#[derive(Debug)]
pub struct MittagLeffler {
    alpha: f64,
    beta: f64,
    /// Shift count for non-positive integer `β`; the table is built for `β + shift·α`.
    shift: u32,
    coeffs: Vec<Dd>,
    coeffs_f64: Vec<f64>,
}

fn check_params(alpha: f64, beta: f64) -> Result<(), SpecialError> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(SpecialError::Domain(format!("alpha = {alpha} outside (0, 2]")));
    }
    if !beta.is_finite() {
        return Err(SpecialError::Domain(format!("beta = {beta} is not finite")));
    }
    Ok(())
}

type Cache = RwLock<HashMap<(u64, u64), Arc<MittagLeffler>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl MittagLeffler {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, SpecialError> {
        check_params(alpha, beta)?;
        let mut shift = 0u32;
        let mut b = beta;
        // E_{α,b}(z) = z E_{α,b+α}(z) only while 1/Γ(b) = 0
        while b <= 0.0 && b == b.trunc() {
            b += alpha;
            shift += 1;
        }
        let kmax = ((TABLE_ARG_MAX - b) / alpha).ceil().max(8.0) as usize;
        let coeffs: Vec<Dd> = (0..=kmax)
            .map(|k| recip_gamma_dd(Dd::prod(alpha, k as f64).add_f64(b)))
            .collect();
        let coeffs_f64 = coeffs.iter().map(|c| c.to_f64()).collect();
        Ok(MittagLeffler { alpha, beta, shift, coeffs, coeffs_f64 })
    }

    /// Process-wide cached evaluator.
    pub fn shared(alpha: f64, beta: f64) -> Result<Arc<Self>, SpecialError> {
        check_params(alpha, beta)?;
        let key = (alpha.to_bits(), beta.to_bits());
        if let Some(e) = cache().read().expect("ml cache poisoned").get(&key) {
            return Ok(Arc::clone(e));
        }
        let e = Arc::new(MittagLeffler::new(alpha, beta)?);
        cache()
            .write()
            .expect("ml cache poisoned")
            .entry(key)
            .or_insert_with(|| Arc::clone(&e));
        Ok(e)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Effective second parameter of the tabulated series.
    fn beta_eff(&self) -> f64 {
        self.beta + self.shift as f64 * self.alpha
    }

    /// Value only; panics never, returns NaN on overflow.
    pub fn value(&self, z: f64) -> f64 {
        self.eval(z).map(|r| r.value).unwrap_or(f64::NAN)
    }

    pub fn eval(&self, z: f64) -> Result<MlResult, SpecialError> {
        if z.is_nan() {
            return Err(SpecialError::Domain("z is NaN".into()));
        }
        let inner = self.eval_reduced(z)?;
        if self.shift == 0 {
            return Ok(inner);
        }
        let zk = z.powi(self.shift as i32);
        let value = zk * inner.value;
        if !value.is_finite() {
            return Err(SpecialError::Overflow { alpha: self.alpha, beta: self.beta, z });
        }
        Ok(MlResult {
            value,
            method: MlMethod::RecurrenceReduced,
            est_abs_error: zk.abs() * inner.est_abs_error + EPS * value.abs(),
        })
    }

    fn eval_reduced(&self, z: f64) -> Result<MlResult, SpecialError> {
        let (alpha, beta) = (self.alpha, self.beta_eff());
        if z == 0.0 {
            return Ok(MlResult { value: self.coeffs_f64[0], method: MlMethod::Series, est_abs_error: 0.0 });
        }
        if z.is_infinite() {
            if z < 0.0 {
                return Ok(MlResult { value: 0.0, method: MlMethod::Asymptotic, est_abs_error: 0.0 });
            }
            return Err(SpecialError::Overflow { alpha, beta: self.beta, z });
        }
        let r = z.abs().powf(1.0 / alpha);
        let out = if z > 0.0 {
            if r <= R_POS_LOG {
                self.series_f64(z, r)
            } else {
                series_log_positive(alpha, beta, z, r)
            }
        } else if r <= 1.0 {
            self.series_f64(z, r)
        } else if r < R_ASYM_MIN {
            self.series_dd(z, r)
        } else {
            let asym = asymptotic_negative(alpha, beta, z, r);
            let predicted_dd = 3e-30 * r.powf(1.0 - beta) * r.exp() / alpha + EPS * asym.value.abs();
            if r > R_DD_MAX || asym.est_abs_error <= predicted_dd {
                asym
            } else {
                self.series_dd(z, r)
            }
        };
        if !out.value.is_finite() {
            return Err(SpecialError::Overflow { alpha, beta: self.beta, z });
        }
        Ok(out)
    }

    fn past_peak(&self, k: usize, r: f64) -> bool {
        self.alpha * k as f64 + self.beta_eff() > r + 1.0
    }

    fn series_f64(&self, z: f64, r: f64) -> MlResult {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut zk = 1.0;
        let mut quiet = 0;
        let mut last = 0.0;
        for (k, &c) in self.coeffs_f64.iter().enumerate() {
            let t = c * zk;
            sum += t;
            abs_sum += t.abs();
            last = t.abs();
            if self.past_peak(k, r) && t.abs() <= 1e-17 * sum.abs() {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            zk *= z;
        }
        MlResult {
            value: sum,
            method: MlMethod::Series,
            est_abs_error: 2.0 * EPS * abs_sum + last,
        }
    }

    fn series_dd(&self, z: f64, r: f64) -> MlResult {
        let mut sum = Dd::ZERO;
        let mut abs_sum = 0.0;
        let mut zk = Dd::ONE;
        let mut quiet = 0;
        let mut last = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            let t = c * zk;
            sum = sum + t;
            abs_sum += t.hi.abs();
            last = t.hi.abs();
            if self.past_peak(k, r) && t.hi.abs() <= 1e-33 * sum.hi.abs() {
                quiet += 1;
                if quiet == 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
            zk = zk.mul_f64(z);
        }
        let value = sum.to_f64();
        MlResult {
            value,
            method: MlMethod::SeriesExtended,
            est_abs_error: 3e-30 * abs_sum + last + 0.5 * EPS * value.abs(),
        }
    }
}

/// Series for `z > 0` with terms formed in log space.
fn series_log_positive(alpha: f64, beta: f64, z: f64, r: f64) -> MlResult {
    let lnz = z.ln();
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut k = 0usize;
    loop {
        let x = alpha * k as f64 + beta;
        let sign = gamma_sign(x);
        if sign != 0.0 {
            let lt = k as f64 * lnz - ln_gamma(x);
            peak = peak.max(lt);
            terms.push((sign, lt));
            if x > r + 1.0 && lt < peak - 45.0 {
                break;
            }
        }
        k += 1;
    }
    let s: f64 = terms.iter().map(|&(sg, lt)| sg * (lt - peak).exp()).sum();
    let value = s * peak.exp();
    MlResult {
        value,
        method: MlMethod::Series,
        est_abs_error: value.abs() * (4.0 * EPS * (1.0 + peak.abs())),
    }
}

/// Large-argument form for `z < 0`.
fn asymptotic_negative(alpha: f64, beta: f64, z: f64, r: f64) -> MlResult {
    use std::f64::consts::PI;
    let mut exp_part = 0.0;
    let mut exp_mag = 0.0;
    // poles s_j = r e^{iθ_j}, θ_j = (2j + 1)π/α, |θ_j| <= π
    let mut j = 0i32;
    loop {
        let odd = (2 * j + 1) as f64;
        if odd > alpha {
            break;
        }
        let theta = odd * PI / alpha;
        let (st, ct) = theta.sin_cos();
        let (st, ct) = if odd == alpha { (0.0, -1.0) } else { (st, ct) };
        let amp = r.powf(1.0 - beta) * (r * ct).exp() / alpha;
        let weight = if odd == alpha { 1.0 } else { 2.0 };
        let phase = (1.0 - beta) * theta + r * st;
        exp_part += weight * amp * phase.cos();
        exp_mag += weight * amp * (1.0 + r * st.abs());
        j += 1;
    }

    // -Σ_{k>=1} z^{-k} / Γ(β - αk), with 1/Γ(β-αk) = sin(π(β-αk)) Γ(1-β+αk) / π.
    // Truncation follows the envelope without the sine factor, which can dip to
    // zero at isolated k without the series having converged.
    let lnz = z.abs().ln();
    let mut alg = 0.0;
    let mut alg_abs = 0.0;
    let mut prev_env = f64::INFINITY;
    let mut remainder = 0.0;
    let kcap = ((r / alpha) as usize + 8).min(20_000);
    // integer α and β: every term with β - αk ≤ 0 vanishes and the sum is finite
    let terminating = (alpha == 1.0 || alpha == 2.0) && beta.fract() == 0.0;
    for k in 1..=kcap {
        let x = beta - alpha * k as f64;
        if terminating && x <= 0.0 {
            remainder = 0.0;
            break;
        }
        // 1/Γ(x) dips to zero near x = 0, so below x = 1 the envelope comes from reflection
        let (ln_env, sign, factor) = if x >= 1.0 {
            (-(k as f64) * lnz - ln_gamma(x), 1.0, 1.0)
        } else {
            let s = sin_pi(x);
            (-(k as f64) * lnz + ln_gamma(1.0 - x) - PI.ln(), s.signum(), s.abs())
        };
        let env = ln_env.exp();
        if env > prev_env {
            remainder = prev_env;
            break;
        }
        if env < 1e-17 * (alg + exp_part).abs() {
            remainder = env;
            break;
        }
        prev_env = env;
        remainder = env;
        if factor == 0.0 {
            continue;
        }
        // z^{-k} carries (-1)^k for negative z
        let zsign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let t_abs = env * factor;
        alg -= zsign * sign * t_abs;
        alg_abs += t_abs;
    }
    let value = exp_part + alg;
    MlResult {
        value,
        method: MlMethod::Asymptotic,
        est_abs_error: remainder + 64.0 * EPS * alg_abs + 4.0 * EPS * exp_mag,
    }
}

/// One-shot evaluation through the shared evaluator cache.
pub fn ml(q: MlQuery) -> Result<MlResult, SpecialError> {
    MittagLeffler::shared(q.alpha, q.beta)?.eval(q.z)
}

/// `E_{α,β}(z)` value, or an error.
pub fn ml_value(alpha: f64, beta: f64, z: f64) -> Result<f64, SpecialError> {
    ml(MlQuery { alpha, beta, z }).map(|r| r.value)
}

/// Leading coefficient `1/Γ(β)`, exposed for callers building closed forms.
pub fn ml_at_zero(beta: f64) -> f64 {
    recip_gamma(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(alpha: f64, beta: f64, z: f64, want: f64) -> MlResult {
        let got = ml(MlQuery { alpha, beta, z }).unwrap();
        let tol = 1e-12 * want.abs().max(1.0);
        assert!(
            (got.value - want).abs() <= tol,
            "E({alpha},{beta},{z}) = {} ({:?}), want {want}, diff {:e}",
            got.value,
            got.method,
            (got.value - want).abs()
        );
        got
    }

    #[test]
    fn reference_values() {
        check(1.5, 1.5, -1.0, 0.7065280370641757942561378);
        check(1.8, 0.0, -2.0, -1.236122321531784665052443);
        check(1.8, 1.8, -2.0, 0.6180611607658923325262214);
        check(1.5, 1.5, -50.0, -0.0002833110656227309145002396);
        check(1.25, 1.0, -100.0, -0.002083427280835188394292304);
        check(1.75, 0.75, -30.0, 0.2214573355821183544557493);
        check(1.5, 2.5, -200.0, 0.005007050121239684886264387);
        check(2.0, 0.5, -400.0, -1.595481583984864030229601);
        check(1.9, 1.9, -1000.0, 0.0003132580207253424195170764);
        check(1.5, 1.5, -10000.0, -4.231420210490275490354752e-9);
        check(1.25, 0.25, -8.0, 0.0354702061830212830958186);
        check(0.5, 1.0, -3.0, 0.1790011511813899504192948);
        check(1.6, -0.7, -12.0, 0.3770222659131453804439248);
        check(1.5, 1.0, 5.0, 12.45728912644395123351466);
        let big = check(1.2, 0.9, 40.0, 2805254231.102601564139986);
        assert!(big.est_abs_error < 1e-3);
    }

    #[test]
    fn elementary_cases() {
        for &z in &[-30.0, -5.0, -0.3, 0.0, 0.7, 4.0] {
            let e = ml_value(1.0, 1.0, z).unwrap();
            assert!((e - f64::exp(z)).abs() <= 1e-14 * f64::exp(z).max(1.0), "z = {z}");
        }
        for &x in &[0.1, 1.0, 3.0, 7.5, 20.0] {
            let c = ml_value(2.0, 1.0, -x * x).unwrap();
            assert!((c - x.cos()).abs() < 1e-13, "x = {x}: {c} vs {}", x.cos());
            let s = ml_value(2.0, 2.0, -x * x).unwrap() * x;
            assert!((s - x.sin()).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn nonpositive_beta_uses_recurrence() {
        let r = ml(MlQuery { alpha: 1.8, beta: 0.0, z: -2.0 }).unwrap();
        assert_eq!(r.method, MlMethod::RecurrenceReduced);
        let rhs = -2.0 * ml_value(1.8, 1.8, -2.0).unwrap();
        assert_eq!(r.value, rhs);
    }

    #[test]
    fn shift_stops_at_noninteger_beta() {
        // β = -1 shifts once to -0.5, where 1/Γ(-0.5) ≠ 0
        for &z in &[-40.0, -3.0, 0.5, 2.0] {
            let lhs = ml_value(0.5, -1.0, z).unwrap();
            let rhs = z * ml_value(0.5, -0.5, z).unwrap();
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn exp_tail_keeps_relative_accuracy() {
        for &z in &[-12.0, -20.0, -25.0, -40.0] {
            let v = ml_value(1.0, 1.0, z).unwrap();
            assert!((v / f64::exp(z) - 1.0).abs() < 1e-14, "z = {z}");
        }
    }

    #[test]
    fn asymptotic_envelope_near_gamma_pole() {
        // β - α lands just above 0, where 1/Γ is tiny but the next terms are not
        let (a, b, z) = (0.2, 0.002384191411594277, -27.193760566510353);
        let lhs = ml_value(a, b, z).unwrap();
        let rhs = z * ml_value(a, a + b, z).unwrap() + recip_gamma(b);
        assert!((lhs - rhs).abs() < 1e-14, "{lhs} vs {rhs}");
    }

    #[test]
    fn domain_and_overflow() {
        assert!(matches!(ml_value(0.0, 1.0, 1.0), Err(SpecialError::Domain(_))));
        assert!(matches!(ml_value(2.5, 1.0, 1.0), Err(SpecialError::Domain(_))));
        assert!(matches!(ml_value(1.5, f64::NAN, 1.0), Err(SpecialError::Domain(_))));
        assert!(matches!(ml_value(1.5, 1.0, 1e5), Err(SpecialError::Overflow { .. })));
    }

    #[test]
    fn regimes_are_reported() {
        let m = |z| ml(MlQuery { alpha: 1.5, beta: 1.0, z }).unwrap().method;
        assert_eq!(m(-0.5), MlMethod::Series);
        assert_eq!(m(-5.0), MlMethod::SeriesExtended);
        assert_eq!(m(-5000.0), MlMethod::Asymptotic);
    }
}
