//! Evaluating the two-parameter Mittag-Leffler function.
//!
//! ```bash
//! cargo run -p fracwave --example mittag_leffler
//! ```

use fracwave::special::{ml, MittagLeffler, MlQuery};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // One-off queries report the regime used and an error estimate.
    for z in [-0.5, -5.0, -60.0, -1e4, 3.0] {
        let r = ml(MlQuery { alpha: 1.5, beta: 1.0, z })?;
        println!("E_1.5,1({z:>8}) = {:>24.16e}  {:?}  ±{:.1e}", r.value, r.method, r.est_abs_error);
    }

    // Classical reductions.
    let w: f64 = 2.3;
    let cos = MittagLeffler::shared(2.0, 1.0)?.value(-w * w);
    let sinc = MittagLeffler::shared(2.0, 2.0)?.value(-w * w);
    println!("E_2,1(-w^2) - cos w     = {:.1e}", cos - w.cos());
    println!("E_2,2(-w^2) - sin(w)/w  = {:.1e}", sinc - w.sin() / w);
    println!("E_1,1(-20) / exp(-20)   = {:.17}", MittagLeffler::shared(1.0, 1.0)?.value(-20.0) / (-20f64).exp());

    // Non-positive integer β goes through E_{α,β}(z) = z E_{α,β+α}(z).
    let r = ml(MlQuery { alpha: 1.5, beta: 0.0, z: -2.0 })?;
    println!("E_1.5,0(-2) = {:.16e}  {:?}", r.value, r.method);

    // Decay like 1/|z| on the negative axis; the limit is |1/Γ(β-α)|.
    let e = MittagLeffler::shared(1.25, 1.0)?;
    for x in [1e2, 1e4, 1e6] {
        println!("(1+x)|E_1.25,1(-{x:e})| = {:.6}", (1.0 + x) * e.value(-x).abs());
    }
    Ok(())
}
