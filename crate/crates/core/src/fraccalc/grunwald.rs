//! Grünwald-Letnikov differences, first order, for smooth data only.

use super::{FracCalcError, SampledFunction};

/// `h^{-q} Σ_{j=0}^{k} w_j f(t_{k-j})` with `w_j = (-1)^j C(q, j)`.
///
/// Coincides with the Riemann-Liouville derivative for data that are smooth on
/// `[0, t_k]`; data with a declared singular exponent are rejected.
pub fn gl_derivative(f: &SampledFunction, order: f64, out_index: usize) -> Result<f64, FracCalcError> {
    if !(order > 0.0 && order <= 2.0) {
        return Err(FracCalcError::Domain(format!("order = {order} outside (0, 2]")));
    }
    if f.singular_exponent.is_some_and(|p| p < 1.0 && p != 0.0) {
        return Err(FracCalcError::Domain("Grünwald-Letnikov path requires smooth data".into()));
    }
    if out_index > f.grid.n {
        return Err(FracCalcError::OutOfGrid { index: out_index, n: f.grid.n });
    }
    let mut w = 1.0;
    let mut sum = 0.0;
    for j in 0..=out_index {
        sum += w * f.values[out_index - j];
        w *= 1.0 - (order + 1.0) / (j as f64 + 1.0);
    }
    Ok(sum / f.grid.h().powf(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fraccalc::UniformGrid;
    use crate::special::gamma;

    #[test]
    fn first_order_convergence_on_square() {
        // D^0.5 t^2 = Γ(3)/Γ(2.5) t^1.5
        let want = gamma(3.0) / gamma(2.5);
        let err = |n| {
            let g = UniformGrid::new(1.0, n).unwrap();
            let f = SampledFunction::from_fn(g, |t| t * t, None).unwrap();
            (gl_derivative(&f, 0.5, n).unwrap() - want).abs()
        };
        let (e1, e2) = (err(200), err(400));
        assert!(e1 < 1e-2 && e1 / e2 > 1.8, "{e1} {e2}");
    }

    #[test]
    fn rejects_singular_data() {
        let g = UniformGrid::new(1.0, 10).unwrap();
        let f = SampledFunction::from_fn(g, |t| t.powf(-0.5), Some(-0.5)).unwrap();
        assert!(gl_derivative(&f, 0.5, 5).is_err());
    }
}
