//! Numerical Riemann-Liouville integral and derivative on a uniform grid,
//! compared against Mittag-Leffler closed forms.
//!
//! ```bash
//! cargo run -p fracwave --example fractional_operators
//! ```

use fracwave::fraccalc::{gl_derivative, rl_derivative_num, rl_integral_num, SampledFunction, UniformGrid};
use fracwave::special::ml_value;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (alpha, m) = (1.5, -1.0);
    let g = |t: f64, b: f64| t.powf(b - 1.0) * ml_value(alpha, b, m * t.powf(alpha)).unwrap();

    for n in [250, 500, 1000, 2000] {
        let grid = UniformGrid::new(1.0, n)?;
        // t^{α-1} E_{α,α}(m t^α) behaves like t^{α-1} at the origin
        let f = SampledFunction::from_fn(grid, |t| g(t, alpha), Some(alpha - 1.0))?;
        let i = rl_integral_num(&f, 0.4, n)?;
        let d = rl_derivative_num(&f, 0.6, n)?;
        println!(
            "n = {n:>4}  I^0.4 error {:.2e}  D^0.6 error {:.2e}",
            (i - g(1.0, alpha + 0.4)).abs(),
            (d - g(1.0, alpha - 0.6)).abs()
        );
    }

    // Grünwald-Letnikov on smooth data: D^0.5 t^2 = Γ(3)/Γ(2.5) t^1.5.
    let grid = UniformGrid::new(1.0, 2000)?;
    let f = SampledFunction::from_fn(grid, |t| t * t, None)?;
    let want = 2.0 / fracwave::special::gamma(2.5);
    println!("GL D^0.5 t^2 at 1: {:.6} (exact {want:.6})", gl_derivative(&f, 0.5, 2000)?);
    Ok(())
}
