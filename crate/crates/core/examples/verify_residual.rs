//! Independent check of a closed-form solution: apply the numerical
//! fractional derivative to the sampled solution and measure the residual.
//!
//! ```bash
//! cargo run -p fracwave --example verify_residual
//! ```

use fracwave::fraccalc::UniformGrid;
use fracwave::solvers::{residual_report, singular_exponent_estimate, solve_cauchy, CauchySpec, EquationParams, SourceTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alpha = 1.3;
    let eq = EquationParams::new(alpha, -1.5, 1.0)?;
    let f = SourceTerm::Exp { coef: 1.0, k: -2.0 };
    let u = solve_cauchy(&CauchySpec::new(eq, 0.2, alpha - 1.0, 0.5, 1.0, f))?;
    for n in [250, 500, 1000] {
        let r = residual_report(&u, UniformGrid::new(1.0, n)?, 0.05)?;
        println!("h = {:.1e}: relative residual {:.3e} (tolerance {:.1e}) pass {}", r.h, r.rel_residual, r.tolerance, r.pass);
    }
    println!("leading exponent near 0: {:.4} (alpha - 2 = {})", singular_exponent_estimate(&u)?, alpha - 2.0);
    Ok(())
}
