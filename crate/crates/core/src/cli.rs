//! Command-line front end. Exit codes: 0 success, 2 configuration error,
//! 3 numerical failure, 4 inconclusive classification. Failures print one
//! `error kind=<kind> message="<text>"` line on stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::load_config;
use crate::criteria::thresholds;
use crate::diagnostics::{ray_region_check, speed_bounds_check, CheckReport, Outcome, SpeedConstants};
use crate::equilibrium::{classify_equilibrium, newton_from_default_seed};
use crate::error::{Error, Result};
use crate::io::{self, fmt_f64, key_value_text};
use crate::model::{apriori_bounds, ModelParams};
use crate::semiwave::{solve_semiwave, SemiWaveQuery};
use crate::solver::run;
use crate::sweep::{run_sweep, summarize, write_summary, FIT_FRACTION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

/// Default `eps` of the ray-region report and its density tolerance.
const RAY_EPS: f64 = 0.1;
const RAY_TOL: f64 = 0.05;
/// Relative widening of the speed brackets in the simulate report.
const SPEED_MARGIN: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "stefan-pp", version, about = "Prey-predator model with two Stefan free boundaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one coupled simulation and write series, snapshots and a report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the semi-wave problem and print its speed.
    Semiwave(SemiwaveArgs),
    /// Coexistence equilibrium with a Newton cross-check.
    Equilibrium {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        m: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Spreading/vanishing thresholds for a parameter file.
    Criteria {
        #[arg(long)]
        params: PathBuf,
        /// Separation speed.
        #[arg(long)]
        s: Option<f64>,
        /// Also write the report as `key,value` CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the Cartesian product of the `sweep.<param>` lists.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `workers` from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct SemiwaveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the profile `(y, q)` here.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

/// Failure category and exit code of an error.
pub fn classify_error(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Parse { .. } => ("parse", EXIT_CONFIG),
        Error::Validation(_) | Error::InvalidParameter(_) | Error::InvalidInitialData(_) => {
            ("validation", EXIT_CONFIG)
        }
        Error::Io(_) | Error::Csv(_) => ("io", EXIT_CONFIG),
        Error::Inconclusive { .. } => ("inconclusive", EXIT_INCONCLUSIVE),
        _ => ("numerical", EXIT_NUMERICAL),
    }
}

pub fn error_line(e: &Error) -> String {
    let (kind, _) = classify_error(e);
    let msg = e.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    format!("error kind={kind} message=\"{msg}\"")
}

/// Parses `args` (including the program name) and runs the command; returns
/// the exit code. Output goes to stdout, errors to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            classify_error(&e).1
        }
    }
}

/// Runs a command and returns its stdout text and exit code.
pub fn execute(cmd: &Command) -> Result<(String, i32)> {
    match cmd {
        Command::Simulate { config, out } => cmd_simulate(config, out.as_deref()),
        Command::Semiwave(a) => cmd_semiwave(a),
        Command::Equilibrium { lambda, b, m, c } => cmd_equilibrium(*lambda, *b, *m, *c),
        Command::Criteria { params, s, csv } => cmd_criteria(params, *s, csv.as_deref()),
        Command::Sweep { config, out, workers } => cmd_sweep(config, out.as_deref(), *workers),
    }
}

pub fn cmd_simulate(config: &Path, out: Option<&Path>) -> Result<(String, i32)> {
    let cfg = load_config(config)?;
    let init = cfg.initial_data()?;
    let p = &cfg.params;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone());
    let traj = run(p, &init, &cfg.solver)?;

    io::write_series_csv(&dir.join("series.csv"), &traj)?;
    let mut index = Vec::new();
    for (i, s) in traj.snapshots.iter().enumerate() {
        let name = format!("snapshot_{i:04}.csv");
        io::write_snapshot_csv(&dir.join(&name), s)?;
        index.push(vec![i.to_string(), fmt_f64(s.t), fmt_f64(s.h), fmt_f64(s.g), name]);
    }
    io::write_table(&dir.join("snapshots.csv"), &["index", "t", "h", "g", "file"], &index)?;

    let summary = summarize(&traj, p, &cfg.solver)?;
    let bounds = apriori_bounds(p, &init);
    let consts = SpeedConstants::new(p, bounds.m2);
    let mut report = CheckReport::default();
    if let Ok(r) = speed_bounds_check(&traj, p, FIT_FRACTION, SPEED_MARGIN) {
        report.clauses.extend(r.clauses);
    }
    if let Ok(r) = ray_region_check(&traj, p, &consts, RAY_EPS, RAY_TOL) {
        report.clauses.extend(r.clauses);
    }
    io::write_report_csv(&dir.join("report.csv"), &report)?;

    let r = &summary.report;
    let opt = |v: Option<f64>| v.map_or("undefined".to_string(), fmt_f64);
    let mut entries = vec![
        ("outcome", r.outcome.to_string()),
        ("prey", r.prey.to_string()),
        ("predator", r.predator.to_string()),
        ("t_end", fmt_f64(traj.t_end)),
        ("steps", traj.steps.to_string()),
        ("h_final", fmt_f64(*traj.h_series.last().unwrap_or(&f64::NAN))),
        ("g_final", fmt_f64(*traj.g_series.last().unwrap_or(&f64::NAN))),
        ("h_speed", fmt_f64(summary.h_speed)),
        ("g_speed", fmt_f64(summary.g_speed)),
        ("u_final_0", fmt_f64(summary.u_final_0)),
        ("v_final_0", fmt_f64(summary.v_final_0)),
        ("predicted_u", opt(r.predicted_u)),
        ("predicted_v", opt(r.predicted_v)),
        ("bound_violations", traj.violations.len().to_string()),
        ("M1", fmt_f64(bounds.m1)),
        ("M2", fmt_f64(bounds.m2)),
        ("M3", fmt_f64(bounds.m3)),
        ("M4", fmt_f64(bounds.m4)),
    ];
    entries.push(("output_dir", dir.display().to_string()));
    let mut text = key_value_text(&entries);
    text.push_str(&report.to_text());
    io::write_text(&dir.join("report.txt"), &text)?;

    let code = if r.outcome == Outcome::Undecided { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok((text, code))
}

pub fn cmd_semiwave(a: &SemiwaveArgs) -> Result<(String, i32)> {
    let sol = solve_semiwave(SemiWaveQuery::new(a.beta, a.d, a.theta)?, a.tol)?;
    if let Some(path) = &a.profile {
        io::write_profile_csv(path, &sol)?;
    }
    let text = key_value_text(&[
        ("c", fmt_f64(sol.c)),
        ("c_over_sqrt_theta_d", fmt_f64(sol.normalized_speed())),
        ("ratio", fmt_f64(sol.query.ratio())),
        ("y_max", fmt_f64(sol.y_max)),
        ("residual", fmt_f64(sol.residual)),
    ]);
    Ok((text, EXIT_OK))
}

pub fn cmd_equilibrium(lambda: f64, b: f64, m: f64, c: f64) -> Result<(String, i32)> {
    // Only the kinetic parameters matter here.
    let p = ModelParams::new(lambda, b, m, 1.0, c, 0.0, 0.0, 1.0, 1.0)?;
    let eq = classify_equilibrium(&p)?;
    let mut entries = vec![
        ("regime", eq.regime_ok.to_string()),
        ("A", fmt_f64(eq.a)),
        ("delta1", fmt_f64(eq.delta1)),
    ];
    if eq.regime_ok {
        let (ru, rv) = eq.residual(&p);
        entries.extend([
            ("u_star", fmt_f64(eq.u_star)),
            ("v_star", fmt_f64(eq.v_star)),
            ("residual_u", fmt_f64(ru)),
            ("residual_v", fmt_f64(rv)),
        ]);
        let (nu, nv) = newton_from_default_seed(&p)?;
        entries.extend([("newton_u", fmt_f64(nu)), ("newton_v", fmt_f64(nv))]);
    }
    Ok((key_value_text(&entries), EXIT_OK))
}

pub fn cmd_criteria(params: &Path, s: Option<f64>, csv: Option<&Path>) -> Result<(String, i32)> {
    let cfg = load_config(params)?;
    let report = thresholds(&cfg.params, s)?;
    if let Some(path) = csv {
        let rows: Vec<Vec<String>> = report
            .entries()
            .into_iter()
            .map(|(k, v)| vec![k.to_string(), v])
            .collect();
        io::write_table(path, &["key", "value"], &rows)?;
    }
    Ok((report.to_text(), EXIT_OK))
}

pub fn cmd_sweep(config: &Path, out: Option<&Path>, workers: Option<usize>) -> Result<(String, i32)> {
    let cfg = load_config(config)?;
    if cfg.sweep.is_empty() {
        return Err(Error::Validation("sweep needs at least one `sweep.<param>` line".into()));
    }
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone());
    let rows = run_sweep(&cfg, workers.unwrap_or(cfg.workers))?;
    let path = dir.join("summary.csv");
    write_summary(&path, &cfg.sweep, &rows)?;

    let failed = rows.iter().filter(|r| r.result.is_err()).count();
    let undecided = rows.iter().filter(|r| r.outcome() == Some(Outcome::Undecided)).count();
    let mut text = key_value_text(&[
        ("runs", rows.len().to_string()),
        ("failed", failed.to_string()),
        ("undecided", undecided.to_string()),
        ("summary", path.display().to_string()),
    ]);
    for r in &rows {
        if let Err(e) = &r.result {
            text.push_str(&format!("run {}: {}\n", r.point.index, error_line(e)));
        }
    }
    let code = if failed > 0 {
        EXIT_NUMERICAL
    } else if undecided > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    };
    Ok((text, code))
}
