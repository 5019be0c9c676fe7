//! Bisection for the critical capacity separating vanishing from spreading
//! when the initial habitat is below the threshold radius.
//!
//! cargo run --release --example critical_capacity

use std::f64::consts::FRAC_PI_2;

use stefan_pp::criteria::{find_critical_capacity, verdict_at, CapacitySearch};
use stefan_pp::solver::SolverConfig;
use stefan_pp::Profile;

fn main() -> stefan_pp::Result<()> {
    let search = CapacitySearch { theta: 1.0, d: 1.0, profile: Profile::cosine(0.8 * FRAC_PI_2, 1.0, 257)? };
    let cfg = SolverConfig { n_u: 128, t_end: 100.0, dt_max: 0.05, snapshot_every: 0.0, ..Default::default() };
    println!("threshold radius {:.6}, initial radius {:.6}", search.threshold_radius(), search.profile.radius());

    let cc = find_critical_capacity(&search, (0.01, 50.0), 12, &cfg)?;
    println!("critical capacity in [{:.5}, {:.5}] (width {:.5})", cc.lower, cc.upper, cc.width());
    for (beta, v) in &cc.history {
        println!("  beta {beta:>10.5} -> {v}");
    }
    for beta in [cc.lower / 2.0, 2.0 * cc.upper] {
        let (v, t) = verdict_at(&search, beta, &cfg)?;
        println!("beta {beta:.4}: {v} (t_end {t})");
    }
    Ok(())
}
