//! Sweep of the prey capacity `mu` with a small initial habitat: the prey
//! outcome switches from vanishing to spreading once.
//!
//! cargo run --release --example sweep

use stefan_pp::config::parse_config;
use stefan_pp::sweep::run_sweep;

const CONFIG: &str = "
lambda = 2
b = 1
m = 1
d = 1
c = 1
mu = 1
rho = 0.5
h0 = 0.8
g0 = 0.8
n_u = 128
n_v = 128
t_end = 60
dt_max = 0.05
sweep.mu = 0.1, 0.3, 1, 2, 4, 6, 8, 10
";

fn main() -> stefan_pp::Result<()> {
    let cfg = parse_config(CONFIG)?;
    let rows = run_sweep(&cfg, 4)?;
    println!("{:>6} {:>12} {:>10} {:>10} {:>10}", "mu", "outcome", "prey", "h_speed", "u(T,0)");
    for r in &rows {
        match &r.result {
            Ok(s) => println!(
                "{:>6} {:>12} {:>10} {:>10.5} {:>10.5}",
                r.point.values[0], s.report.outcome, s.report.prey, s.h_speed, s.u_final_0
            ),
            Err(e) => println!("{:>6} failed: {e}", r.point.values[0]),
        }
    }
    Ok(())
}
