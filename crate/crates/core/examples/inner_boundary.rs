//! Inner-boundary conditions: `I^β u` at `a`, `D^γ u` at `b`, including a
//! degenerate configuration.
//!
//! ```bash
//! cargo run -p fracwave --example inner_boundary
//! ```

use std::f64::consts::PI;

use fracwave::solvers::{f_hat, solve_inner_boundary, EquationParams, FhatForm, InnerBoundarySpec, SolverError, SourceTerm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eq = EquationParams::new(1.75, -2.0, 1.0)?;
    let (beta, gamma, a, b) = (0.1, 0.5, 0.3, 0.8);
    let u = solve_inner_boundary(&InnerBoundarySpec::new(eq, beta, gamma, a, b, 1.0, 0.0, SourceTerm::Zero))?;
    println!("I^b u(a) = {:.15}, D^g u(b) = {:.15}", u.ibeta(beta, a)?, u.dgamma(gamma, b)?);
    for t in [0.2, 0.6, 1.0] {
        let resolved = f_hat(1, &eq, beta, gamma, a, b, t, FhatForm::Resolved)?;
        let printed = f_hat(1, &eq, beta, gamma, a, b, t, FhatForm::AsPrinted)?;
        println!("t = {t}: direct {:.12}  resolved basis {resolved:.12}  unweighted bracket {printed:.12}", u.eval(t)?);
    }

    // u'' + u = 0 with u(π/2) = 1, u'(π) = 0 has no solution.
    let eq = EquationParams::new(2.0, -1.0, 4.0)?;
    match solve_inner_boundary(&InnerBoundarySpec::new(eq, 0.0, 1.0, PI / 2.0, PI, 1.0, 0.0, SourceTerm::Zero)) {
        Err(SolverError::DegenerateSystem(r)) => println!("degenerate: det = {:.2e}, matrix {:?}", r.det, r.matrix),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
