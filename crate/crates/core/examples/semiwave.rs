//! Semi-wave speeds across the capacity ratio `theta beta / d`, showing both
//! limiting regimes of `c / sqrt(theta d)`.
//!
//! cargo run --example semiwave

use stefan_pp::semiwave::{solve_semiwave, SemiWaveQuery};

fn main() -> stefan_pp::Result<()> {
    println!("{:>12} {:>14} {:>14} {:>14}", "ratio", "c", "c/sqrt(td)", "c d/(t b sqrt(td))");
    for exp in -3..=4 {
        let beta = 10f64.powi(exp);
        let sol = solve_semiwave(SemiWaveQuery::new(beta, 1.0, 1.0)?, 1e-10)?;
        let norm = sol.normalized_speed();
        println!("{:>12.1e} {:>14.8} {:>14.8} {:>14.8}", beta, sol.c, norm, norm / beta);
    }
    println!("small-ratio limit 1/sqrt(3) = {:.8}", 1.0 / 3f64.sqrt());

    let sol = solve_semiwave(SemiWaveQuery::new(5.0, 1.0, 1.0)?, 1e-10)?;
    println!("\nprofile of c(5, 1, 1) = {:.8} (y_max = {:.2}, residual {:.1e})", sol.c, sol.y_max, sol.residual);
    for y in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("  q({y:4.1}) = {:.6}", sol.profile_wave(100.0 - y, 100.0)?);
    }
    Ok(())
}
