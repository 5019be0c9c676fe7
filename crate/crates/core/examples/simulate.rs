//! Coupled benchmark: fronts, densities at the origin, a-priori bounds and
//! the semi-wave speed brackets.
//!
//! cargo run --release --example simulate

use stefan_pp::diagnostics::{classify_outcome, estimate_speed, speed_bounds_check};
use stefan_pp::model::apriori_bounds;
use stefan_pp::solver::{run, SolverConfig};
use stefan_pp::{InitialData, ModelParams};

fn main() -> stefan_pp::Result<()> {
    let p = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0)?;
    let init = InitialData::cosine(&p, 1.0, 1.0)?;
    let cfg = SolverConfig { n_u: 512, n_v: 512, t_end: 60.0, ..Default::default() };
    let traj = run(&p, &init, &cfg)?;

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "h", "g", "u(t,0)", "v(t,0)");
    for i in (0..traj.len()).step_by(100) {
        println!(
            "{:>6.1} {:>10.4} {:>10.4} {:>10.6} {:>10.6}",
            traj.times[i], traj.h_series[i], traj.g_series[i], traj.u0_series[i], traj.v0_series[i]
        );
    }

    let b = apriori_bounds(&p, &init);
    println!("\nbounds M1..M4 = {:.3} {:.3} {:.3} {:.3}; violations: {}", b.m1, b.m2, b.m3, b.m4, traj.violations.len());
    let o = classify_outcome(&traj, &p, &cfg)?;
    let h = estimate_speed(&traj.times, &traj.h_series, 0.5)?;
    println!("outcome {} (prey {}, predator {}); h speed {:.5} (r2 {:.6})", o.outcome, o.prey, o.predator, h.value, h.r2);
    print!("{}", speed_bounds_check(&traj, &p, 0.5, 0.05)?.to_text());
    Ok(())
}
