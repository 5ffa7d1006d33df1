//! Gauss-Legendre quadrature and a graded composite rule for integrands with
//! algebraic endpoint behaviour `τ^μ (t - τ)^ν`.

use std::f64::consts::PI;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A quadrature rule with explicit nodes and weights.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        neumaier_sum(self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)))
    }
}

const BULK_POINTS: usize = 8;
const GRADED_POINTS: usize = 16;
const LEVELS: usize = 8;
const RATIO: f64 = 0.25;

/// Rule for `∫_0^t τ^μ (t-τ)^ν G(τ) dτ` with `G` smooth on `(0, t)`.
///
/// The weight `τ^μ (t-τ)^ν` is folded into the returned weights. The first and
/// last bulk panels are refined geometrically toward the endpoint, and the
/// innermost piece uses the substitution `τ = δ v^{1/(μ+1)}` which absorbs
/// the endpoint power exactly. `budget` is the approximate node count;
/// `min_panels` forces a minimum number of bulk panels (for oscillatory `G`).
pub fn endpoint_rule(t: f64, mu: f64, nu: f64, budget: usize, min_panels: usize) -> Rule {
    graded_rule(t, mu, nu, budget, min_panels, true)
}

/// As [`endpoint_rule`] with `ν = 0` and refinement only toward `τ = 0`.
pub fn left_graded_rule(t: f64, mu: f64, budget: usize, min_panels: usize) -> Rule {
    graded_rule(t, mu, 0.0, budget, min_panels, false)
}

fn graded_rule(t: f64, mu: f64, nu: f64, budget: usize, min_panels: usize, grade_right: bool) -> Rule {
    assert!(mu > -1.0 && nu > -1.0, "endpoint exponents must exceed -1");
    assert!(t > 0.0);
    let ends = if grade_right { 2 } else { 1 };
    let graded_nodes = ends * (LEVELS + 1) * GRADED_POINTS;
    let bulk = (budget.saturating_sub(graded_nodes) / BULK_POINTS).max(4).max(min_panels);
    let last_bulk = if grade_right { bulk - 1 } else { bulk };
    let h = t / bulk as f64;
    let gl_bulk = GaussLegendre::new(BULK_POINTS);
    let gl_graded = GaussLegendre::new(GRADED_POINTS);

    let mut rule = Rule::default();
    let weight = |tau: f64| {
        let left = if mu == 0.0 { 1.0 } else { tau.powf(mu) };
        let right = if nu == 0.0 { 1.0 } else { (t - tau).powf(nu) };
        left * right
    };

    // graded pieces near 0, described in the local coordinate s = distance to the endpoint
    let push_graded = |rule: &mut Rule, at_left: bool| {
        let (p_near, p_far) = if at_left { (mu, nu) } else { (nu, mu) };
        let to_tau = |s: f64| if at_left { s } else { t - s };
        let delta = h * RATIO.powi(LEVELS as i32);
        // innermost: ∫_0^δ s^p F(s) ds = δ^{p+1}/(p+1) ∫_0^1 F(δ v^{1/(p+1)}) dv
        let scale = delta.powf(p_near + 1.0) / (p_near + 1.0);
        for (v, w) in gl_graded.mapped(0.0, 1.0) {
            let s = delta * v.powf(1.0 / (p_near + 1.0));
            let far = if p_far == 0.0 { 1.0 } else { (t - s).powf(p_far) };
            rule.nodes.push(to_tau(s));
            rule.weights.push(w * scale * far);
        }
        let mut lo = delta;
        for lvl in (0..LEVELS).rev() {
            let hi = h * RATIO.powi(lvl as i32);
            for (s, w) in gl_graded.mapped(lo, hi) {
                let far = if p_far == 0.0 { 1.0 } else { (t - s).powf(p_far) };
                rule.nodes.push(to_tau(s));
                rule.weights.push(w * s.powf(p_near) * far);
            }
            lo = hi;
        }
    };

    push_graded(&mut rule, true);
    for j in 1..last_bulk {
        let a = j as f64 * h;
        for (tau, w) in gl_bulk.mapped(a, a + h) {
            rule.nodes.push(tau);
            rule.weights.push(w * weight(tau));
        }
    }
    if grade_right {
        push_graded(&mut rule, false);
    }
    rule
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}
