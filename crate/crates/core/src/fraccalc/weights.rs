//! Kernel moments for product integration of `(t-s)^{β-1}` against
//! piecewise-linear data, in grid units (`s = hσ`, `t = nh`).

use crate::quad::GaussLegendre;
use crate::special::gamma;

/// `(k+1)^q - 2k^q + (k-1)^q` without cancellation for large `k`.
pub(crate) fn second_difference_pow(k: f64, q: f64) -> f64 {
    if k < 12.0 {
        return (k + 1.0).powf(q) - 2.0 * k.powf(q) + (k - 1.0).powf(q);
    }
    // k^q · 2 Σ_{m>=1} C(q, 2m) k^{-2m}
    let x = 1.0 / (k * k);
    let mut c = 1.0; // running C(q, j)
    let mut sum = 0.0;
    let mut xp = 1.0;
    for j in 1..=40 {
        let jf = j as f64;
        c *= (q - jf + 1.0) / jf;
        if j % 2 == 0 {
            xp *= x;
            let term = c * xp;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
    }
    2.0 * k.powf(q) * sum
}

/// `(n-1)^{q} - (n-q) n^{q-1}` for `q = β+1`, stable for large `n`.
fn first_weight(n: f64, q: f64) -> f64 {
    if n < 12.0 {
        return (n - 1.0).powf(q) - (n - q) * n.powf(q - 1.0);
    }
    // n^q [ (1 - 1/n)^q - 1 + q/n ] = n^q Σ_{m>=2} C(q, m) (-1/n)^m
    let x = -1.0 / n;
    let mut c = q;
    let mut xp = x;
    let mut sum = 0.0;
    for m in 2..=60 {
        let mf = m as f64;
        c *= (q - mf + 1.0) / mf;
        xp *= x;
        let term = c * xp;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    n.powf(q) * sum
}

/// Product-trapezoid weights `w_j` with `I^β f(t_n) ≈ Σ w_j f_j`.
pub(crate) fn trapezoid_weights(n: usize, beta: f64, h: f64) -> Vec<f64> {
    let scale = h.powf(beta) * 1.0 / gamma(beta + 2.0);
    let q = beta + 1.0;
    let nf = n as f64;
    let mut w = vec![0.0; n + 1];
    if n == 0 {
        return w;
    }
    w[0] = first_weight(nf, q) * scale;
    for (j, wj) in w.iter_mut().enumerate().take(n).skip(1) {
        *wj = second_difference_pow((n - j) as f64, q) * scale;
    }
    w[n] = scale;
    w
}

/// Per-cell moments `(A_j, B_j)` of `σ^p (n-σ)^{β-1}` against the hat functions
/// `(j+1-σ)` and `(σ-j)` on `[j, j+1]`, `j = 0..n-1`.
pub(crate) struct PowerMoments {
    gl: [GaussLegendre; 5],
}

impl PowerMoments {
    pub(crate) fn new() -> Self {
        PowerMoments {
            gl: [
                GaussLegendre::new(12),
                GaussLegendre::new(8),
                GaussLegendre::new(6),
                GaussLegendre::new(4),
                GaussLegendre::new(3),
            ],
        }
    }

    fn rule_for(&self, dist: usize) -> &GaussLegendre {
        match dist {
            0 | 1 => &self.gl[0],
            2 => &self.gl[1],
            3..=9 => &self.gl[2],
            10..=39 => &self.gl[3],
            _ => &self.gl[4],
        }
    }

    /// Moments for output node `n >= 1`, appended to `out` as `(A_j, B_j)`.
    pub(crate) fn cells(&self, n: usize, p: f64, beta: f64, out: &mut Vec<(f64, f64)>) {
        out.clear();
        let nf = n as f64;
        if n == 1 {
            // both endpoints singular: Beta functions
            let b = |x: f64, y: f64| gamma(x) * gamma(y) / gamma(x + y);
            out.push((b(p + 1.0, beta + 1.0), b(p + 2.0, beta)));
            return;
        }
        let km1 = beta - 1.0;
        for j in 0..n {
            let m = if j == 0 {
                first_cell(nf, p, km1)
            } else if j == n - 1 {
                last_cell(nf, p, beta)
            } else {
                let dist = j.min(n - 1 - j);
                let gl = self.rule_for(dist);
                let (a0, b0) = (j as f64, (j + 1) as f64);
                let mut a = 0.0;
                let mut b = 0.0;
                for (s, w) in gl.mapped(a0, b0) {
                    let k = w * s.powf(p) * (nf - s).powf(km1);
                    a += k * (b0 - s);
                    b += k * (s - a0);
                }
                (a, b)
            };
            out.push(m);
        }
    }
}

/// Cell `[0, 1]`: `∫ σ^{p+i} (n-σ)^{β-1}` by the binomial series in `σ/n`.
fn first_cell(n: f64, p: f64, km1: f64) -> (f64, f64) {
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    let mut c = 1.0; // C(β-1, k) (-1/n)^k
    for k in 0..200 {
        let kf = k as f64;
        let t0 = c / (p + kf + 1.0);
        let t1 = c / (p + kf + 2.0);
        m0 += t0;
        m1 += t1;
        if t0.abs() < 1e-18 * m0.abs() && k > 2 {
            break;
        }
        c *= -(km1 - kf) / ((kf + 1.0) * n);
    }
    let scale = n.powf(km1);
    ((m0 - m1) * scale, m1 * scale)
}

/// Cell `[n-1, n]`: with `w = n - σ`, `∫ w^{β-1+i} (n-w)^p` by the series in `w/n`.
fn last_cell(n: f64, p: f64, beta: f64) -> (f64, f64) {
    let mut n0 = 0.0;
    let mut n1 = 0.0;
    let mut c = 1.0; // C(p, k) (-1/n)^k
    for k in 0..200 {
        let kf = k as f64;
        let t0 = c / (beta + kf);
        let t1 = c / (beta + kf + 1.0);
        n0 += t0;
        n1 += t1;
        if t0.abs() < 1e-18 * n0.abs() && k > 2 {
            break;
        }
        c *= -(p - kf) / ((kf + 1.0) * n);
    }
    let scale = n.powf(p);
    // hat (j+1-σ) = w, hat (σ-j) = 1 - w
    (n1 * scale, (n0 - n1) * scale)
}
