//! Time-fractional wave equation `D^α u + A u = f` on `(0, π)` with the
//! Dirichlet Laplacian, solved mode by mode.
//!
//! ```bash
//! cargo run -p fracwave --example spectral_wave
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use fracwave::solvers::SourceTerm;
use fracwave::spectral::{
    data_norms, difference_norm, series_norms, solve_pde, stability_ratio, DirichletLaplacian, Forcing, NormKind,
    PdeProblem, SpatialData,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sp = Arc::new(DirichletLaplacian::new(PI));
    let alpha = 1.5;
    let mut p = PdeProblem::cauchy(alpha, 0.25, alpha - 1.0, 1.0, 32);
    p.u1 = SpatialData::Function(Arc::new(|x| x * (PI - x)));
    p.u2 = SpatialData::Coefficients(vec![0.0, 0.5]);
    p.f = Forcing::Separable(vec![(SourceTerm::Constant { c: 1.0 }, SpatialData::Function(Arc::new(|x| x.sin())))]);

    let s = solve_pde(&p, sp)?;
    for x in [PI / 4.0, PI / 2.0] {
        println!("u(1, {x:.4}) = {:.12}", s.eval(1.0, x)?);
    }

    let norms = series_norms(&s, 1.0, 64)?;
    let data = data_norms(&s, 1.0, 64)?;
    println!("norms {norms:?}");
    for k in [NormKind::U, NormKind::AU, NormKind::DAlphaU] {
        println!("stability ratio {k:?}: {:.6}", stability_ratio(&norms, &data, k)?);
    }
    for n in [4, 8, 16] {
        println!("|u_{n} - u_{}| = {:.3e}", 2 * n, difference_norm(&s.truncated(n), &s.truncated(2 * n), 1.0, 64)?);
    }
    println!("tail indicator {:.3e}", s.tail_indicator());
    Ok(())
}
