//! Cauchy-type problem `D^α u - m u = f` with weighted initial data.
//!
//! ```bash
//! cargo run -p fracwave --example cauchy_problem
//! ```

use fracwave::solvers::{cauchy_functionals, solve_cauchy, CauchySpec, EquationParams, SourceTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // α = 2 is the oscillator u'' + u = e^{-t}.
    let eq = EquationParams::new(2.0, -1.0, 3.0)?;
    let u = solve_cauchy(&CauchySpec::new(eq, 0.0, 1.0, 1.0, 0.5, SourceTerm::Exp { coef: 1.0, k: -1.0 }))?;
    for t in [0.5f64, 1.5, 3.0] {
        let exact = t.cos() + 0.5 * t.sin() + ((-t).exp() - t.cos() + t.sin()) / 2.0;
        println!("alpha = 2, t = {t}: u = {:.15}  exact {exact:.15}", u.eval(t)?);
    }

    // Fractional order: γ = α - 1, data are weighted limits at t = 0.
    let (alpha, beta) = (1.6, 0.3);
    let eq = EquationParams::new(alpha, -2.0, 1.0)?;
    let spec = CauchySpec::new(eq, beta, alpha - 1.0, 0.8, -0.2, SourceTerm::Power { coef: 1.0, p: 0.5 });
    let u = solve_cauchy(&spec)?;
    println!("C1 = {}, C2 = {}", u.c1, u.c2);
    for t in [0.01, 0.1, 1.0] {
        println!("t = {t:<5} u = {:>12.8}  I^b u = {:>10.8}  D^g u = {:>10.8}", u.eval(t)?, u.ibeta(beta, t)?, u.dgamma(alpha - 1.0, t)?);
    }
    let (c1, c2) = cauchy_functionals(&u, beta)?;
    println!("recovered data by extrapolation: ({c1:.8}, {c2:.8})");
    println!("{}", serde_json::to_string_pretty(&u.record())?);
    Ok(())
}
