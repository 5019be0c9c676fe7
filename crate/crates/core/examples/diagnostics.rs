//! Long-time checks on an in-regime coexistence run: convergence of the
//! densities at the origin and the ray-region report.
//!
//! cargo run --release --example diagnostics

use stefan_pp::diagnostics::{approaches, classify_outcome, ray_region_check, SpeedConstants};
use stefan_pp::equilibrium::closed_form_equilibrium;
use stefan_pp::model::apriori_bounds;
use stefan_pp::solver::{run, SolverConfig};
use stefan_pp::{InitialData, ModelParams};

fn main() -> stefan_pp::Result<()> {
    let p = ModelParams::new(1.5, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0)?;
    let init = InitialData::cosine(&p, 1.0, 1.0)?;
    let cfg = SolverConfig { n_u: 512, n_v: 512, t_end: 80.0, snapshot_every: 5.0, ..Default::default() };
    let traj = run(&p, &init, &cfg)?;
    let eq = closed_form_equilibrium(&p)?;
    let o = classify_outcome(&traj, &p, &cfg)?;
    let (u0, v0) = (*traj.u0_series.last().unwrap(), *traj.v0_series.last().unwrap());
    println!("outcome {}", o.outcome);
    println!("u(t,0) = {u0:.6} vs u* = {:.6}; approaching: {}", eq.u_star, approaches(&traj.u0_series, eq.u_star));
    println!("v(t,0) = {v0:.6} vs v* = {:.6}; approaching: {}", eq.v_star, approaches(&traj.v0_series, eq.v_star));

    let consts = SpeedConstants::new(&p, apriori_bounds(&p, &init).m2);
    println!("\nspeed constants {consts:?}");
    print!("{}", ray_region_check(&traj, &p, &consts, 0.1, 0.05)?.to_text());
    Ok(())
}
