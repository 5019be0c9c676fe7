//! Coexistence equilibrium in closed form, cross-checked by Newton, and a
//! scan across the regime `0 < m lambda - b < b / c`.
//!
//! cargo run --example equilibrium

use stefan_pp::equilibrium::{classify_equilibrium, closed_form_equilibrium, newton_from_default_seed};
use stefan_pp::ModelParams;

fn kinetic(lambda: f64, b: f64, m: f64, c: f64) -> stefan_pp::Result<ModelParams> {
    ModelParams::new(lambda, b, m, 1.0, c, 1.0, 1.0, 1.0, 1.0)
}

fn main() -> stefan_pp::Result<()> {
    let p = kinetic(1.5, 1.0, 1.0, 1.0)?;
    let eq = closed_form_equilibrium(&p)?;
    let (nu, nv) = newton_from_default_seed(&p)?;
    let (ru, rv) = eq.residual(&p);
    println!("(lambda, b, m, c) = (1.5, 1, 1, 1)");
    println!("  closed form u* = {:.12}  v* = {:.12}", eq.u_star, eq.v_star);
    println!("  newton      u  = {:.12}  v  = {:.12}", nu, nv);
    println!("  residuals {ru:.2e} {rv:.2e}");

    println!("\n{:>8} {:>8} {:>14} {:>14}", "lambda", "regime", "u*", "v*");
    for k in 0..9 {
        let lambda = 0.9 + 0.15 * k as f64;
        let eq = classify_equilibrium(&kinetic(lambda, 1.0, 1.0, 1.0)?)?;
        println!("{lambda:>8.3} {:>8} {:>14.8} {:>14.8}", eq.regime_ok, eq.u_star, eq.v_star);
    }
    Ok(())
}
