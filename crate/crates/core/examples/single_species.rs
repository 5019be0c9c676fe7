//! Logistic problem with one free boundary: the tail-fit front speed
//! converges to the semi-wave speed as the grid is refined.
//!
//! cargo run --release --example single_species

use stefan_pp::diagnostics::{estimate_speed, semiwave_speed};
use stefan_pp::solver::{run_single_species, LogisticProblem, SolverConfig};
use stefan_pp::Profile;

fn main() -> stefan_pp::Result<()> {
    let prob = LogisticProblem { theta: 1.0, d: 1.0, beta: 5.0 };
    let target = semiwave_speed(prob.beta, prob.d, prob.theta)?;
    let profile = Profile::cosine(2.0, 1.0, 257)?;
    println!("c(5, 1, 1) = {target:.8}");
    for n in [256, 512, 1024, 2048] {
        let cfg = SolverConfig { n_u: n, n_v: 64, t_end: 200.0, snapshot_every: 0.0, ..Default::default() };
        let traj = run_single_species(&prob, &profile, &cfg)?;
        let fit = estimate_speed(&traj.times, &traj.h_series, 0.5)?;
        println!(
            "n = {n:>5}: speed {:.6}  rel. error {:+.3}%  H_est {:.4}  r2 {:.7}",
            fit.value,
            100.0 * (fit.value / target - 1.0),
            fit.h_est,
            fit.r2
        );
    }
    Ok(())
}
