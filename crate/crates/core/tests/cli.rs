use std::path::Path;
use std::process::Command;

use stefan_pp::config::{load_config, parse_config};
use stefan_pp::criteria::{find_critical_capacity, prey_capacity_searches};
use stefan_pp::equilibrium::closed_form_equilibrium;
use stefan_pp::io::{self, read_series_csv, read_snapshot_csv, read_table, SERIES_HEADER, SNAPSHOT_HEADER};
use stefan_pp::solver::{SolverConfig, Verdict};
use stefan_pp::sweep::run_sweep;
use stefan_pp::{ModelParams, Profile};

const BIN: &str = env!("CARGO_BIN_EXE_stefan-pp");

const BENCH: &str = "\
lambda = 2
b = 1
m = 1
d = 1
c = 1
mu = 5
rho = 5
h0 = 2
g0 = 2
n_u = 128
n_v = 128
t_end = 20
growth_window = 5
snapshot_every = 5
seed = 7
";

const MU_SWEEP: &str = "\
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
snapshot_every = 0
sweep.mu = 0.1, 0.3, 1, 2, 4, 6, 8, 10
";

fn stefan(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn simulate_writes_specified_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bench.cfg", BENCH);
    let out = dir.path().join("run");
    let (code, stdout, stderr) = stefan(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stderr}");
    assert!(stdout.contains("outcome"));
    assert_eq!(header(&out.join("series.csv")), "t,h,g,u_max,v_max,u_at_0,v_at_0,h_speed_est,g_speed_est");
    assert_eq!(header(&out.join("snapshot_0000.csv")), "x,u,v");
    assert_eq!(header(&out.join("report.csv")), "clause,target,measured,margin,pass");
    assert!(out.join("report.txt").exists());

    let series = read_series_csv(&out.join("series.csv")).unwrap();
    assert_eq!(series.len(), 201);
    assert_eq!(series[0][1], 2.0);
    assert!(series.windows(2).all(|w| w[1][1] >= w[0][1]));
    let snaps = read_table(&out.join("snapshots.csv")).unwrap();
    assert_eq!(snaps.rows.len(), 5);
    for row in &snaps.rows {
        let s = read_snapshot_csv(&out.join(&row[4])).unwrap();
        let h: f64 = row[2].parse().unwrap();
        assert_eq!(s.last().unwrap()[0], h);
        assert_eq!(s.last().unwrap()[1], 0.0);
    }
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bench.cfg", BENCH);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(stefan(&["simulate", "--config", &cfg, "--out", a.to_str().unwrap()]).0, 0);
    assert_eq!(stefan(&["simulate", "--config", &cfg, "--out", b.to_str().unwrap()]).0, 0);
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for n in names.iter().filter(|n| n.to_str().unwrap().ends_with(".csv")) {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap(), "{n:?}");
    }
}

/// Every written CSV reads back to the in-memory values bit for bit.
#[test]
fn csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(BENCH).unwrap();
    let init = cfg.initial_data().unwrap();
    let traj = stefan_pp::solver::run(&cfg.params, &init, &cfg.solver).unwrap();
    let path = dir.path().join("series.csv");
    io::write_series_csv(&path, &traj).unwrap();
    let rows = read_series_csv(&path).unwrap();
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], traj.times[i]);
        assert_eq!(r[1], traj.h_series[i]);
        assert_eq!(r[6], traj.v0_series[i]);
        assert_eq!(r[8], traj.g_speed_series[i]);
    }
    let s = traj.final_state().unwrap();
    let path = dir.path().join("snap.csv");
    io::write_snapshot_csv(&path, s).unwrap();
    let back = read_snapshot_csv(&path).unwrap();
    assert_eq!(back.len(), s.u.len());
    for (row, (x, &u)) in back.iter().zip(s.prey_x().iter().zip(&s.u)) {
        assert_eq!(row[0], *x);
        assert_eq!(row[1], u);
        assert_eq!(row[2], s.v_at(*x));
    }
    assert_eq!(read_table(&path).unwrap().header, SNAPSHOT_HEADER);
    assert_eq!(read_table(&dir.path().join("series.csv")).unwrap().header, SERIES_HEADER);
}

#[test]
fn csv_profile_in_config() {
    let dir = tempfile::tempdir().unwrap();
    let prof = Profile::cosine(2.0, 0.5, 65).unwrap();
    io::write_initial_profile_csv(&dir.path().join("u0.csv"), &prof).unwrap();
    let cfg = write(dir.path(), "c.cfg", &format!("{BENCH}u0 = csv u0.csv\n"));
    let cfg = load_config(Path::new(&cfg)).unwrap();
    assert_eq!(cfg.initial_data().unwrap().u0, prof);
}

#[test]
fn equilibrium_prints_module_values() {
    let (code, out, _) = stefan(&["equilibrium", "--lambda", "1.5", "--b", "1", "--m", "1", "--c", "1"]);
    assert_eq!(code, 0);
    let p = ModelParams::new(1.5, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let eq = closed_form_equilibrium(&p).unwrap();
    let field = |k: &str| -> f64 {
        let line = out.lines().find(|l| l.split('=').next().unwrap().trim() == k).unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert_eq!(field("u_star"), eq.u_star);
    assert_eq!(field("v_star"), eq.v_star);
    assert!(out.contains("regime") && out.contains("true"));
}

#[test]
fn semiwave_and_criteria_commands() {
    let dir = tempfile::tempdir().unwrap();
    let prof = dir.path().join("q.csv");
    let (code, out, _) = stefan(&["semiwave", "--beta", "1", "--d", "1", "--theta", "1", "--profile", prof.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("c "), "{out}");
    assert_eq!(header(&prof), "y,q");
    let rows = read_table(&prof).unwrap().numeric().unwrap();
    assert_eq!(rows[0], vec![0.0, 0.0]);

    let cfg = write(dir.path(), "p.cfg", BENCH);
    let csv = dir.path().join("t.csv");
    let (code, out, _) = stefan(&["criteria", "--params", &cfg, "--s", "1", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("L_s"));
    assert_eq!(header(&csv), "key,value");
}

#[test]
fn config_errors_exit_two_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", &BENCH.replace("lambda = 2", "lambda = -1"));
    let (code, _, err) = stefan(&["simulate", "--config", &bad]);
    assert_eq!(code, 2);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error kind=validation") && err.contains("lambda must be positive"), "{err}");

    let dup = write(dir.path(), "dup.cfg", &format!("{BENCH}mu = 1\n"));
    let (code, _, err) = stefan(&["simulate", "--config", &dup]);
    assert_eq!(code, 2);
    assert!(err.contains("lines 6 and 16"), "{err}");

    let (code, _, err) = stefan(&["semiwave", "--beta", "0", "--d", "1", "--theta", "1"]);
    assert_eq!(code, 2, "{err}");
    assert_eq!(stefan(&["simulate", "--help"]).0, 0);
}

/// The prey verdict switches from vanishing to spreading at most once, and
/// the switch is consistent with the critical capacities of the two
/// single-species comparison problems.
#[test]
fn mu_sweep_has_one_transition() {
    let cfg = parse_config(MU_SWEEP).unwrap();
    let rows = run_sweep(&cfg, 4).unwrap();
    assert_eq!(rows.len(), 8);
    let verdicts: Vec<Verdict> = rows.iter().map(|r| r.result.as_ref().unwrap().report.prey).collect();
    assert!(verdicts.iter().all(|v| *v != Verdict::Undecided), "{verdicts:?}");
    let flips = verdicts.windows(2).filter(|w| w[0] != w[1]).count();
    assert!(flips <= 1, "{verdicts:?}");
    assert_eq!(verdicts[0], Verdict::Vanishing);
    assert_eq!(verdicts[7], Verdict::Spreading);

    let u0 = cfg.initial_data().unwrap().u0;
    let (fast, slow) = prey_capacity_searches(&cfg.params, &u0).unwrap();
    let sc = SolverConfig { n_u: 128, t_end: 100.0, dt_max: 0.05, snapshot_every: 0.0, ..Default::default() };
    let lower = find_critical_capacity(&fast, (0.01, 20.0), 10, &sc).unwrap();
    let upper = find_critical_capacity(&slow, (0.01, 20.0), 10, &sc).unwrap();
    for (r, v) in rows.iter().zip(&verdicts) {
        let mu = r.point.params.mu;
        match v {
            Verdict::Spreading => assert!(mu >= lower.lower, "{mu} spreads below {}", lower.lower),
            _ => assert!(mu <= upper.upper, "{mu} vanishes above {}", upper.upper),
        }
    }
}

#[test]
fn sweep_output_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let text = MU_SWEEP.replace("t_end = 60", "t_end = 20").replace("sweep.mu = 0.1, 0.3, 1, 2, 4, 6, 8, 10", "sweep.mu = 0.5, 2, 8\nsweep.b = 0, 1");
    let cfg = write(dir.path(), "s.cfg", &text);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (ca, out, _) = stefan(&["sweep", "--config", &cfg, "--out", a.to_str().unwrap(), "--workers", "1"]);
    let (cb, _, _) = stefan(&["sweep", "--config", &cfg, "--out", b.to_str().unwrap(), "--workers", "3"]);
    assert!(ca == 0 || ca == 4, "{out}");
    assert_eq!(ca, cb);
    let sa = std::fs::read(a.join("summary.csv")).unwrap();
    assert_eq!(sa, std::fs::read(b.join("summary.csv")).unwrap());
    let t = read_table(&a.join("summary.csv")).unwrap();
    assert_eq!(t.header[..3], ["mu", "b", "outcome"]);
    assert_eq!(t.rows.len(), 6);
}
