//! Flat `key = value` run configuration.
//!
//! ```text
//! # coupled benchmark
//! lambda = 2
//! b = 1
//! m = 1
//! d = 1
//! c = 1
//! mu = 5
//! rho = 5
//! h0 = 2
//! g0 = 2
//! u0 = cosine 1
//! v0 = csv predator.csv
//! t_end = 60
//! sweep.mu = 0.1, 1, 10
//! ```
//!
//! All nine model parameters are required. Solver knobs fall back to
//! [`SolverConfig::default`]. Relative CSV paths resolve against `base_dir`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::{InitialData, ModelParams, Profile};
use crate::solver::SolverConfig;

pub const MODEL_KEYS: [&str; 9] = ["lambda", "b", "m", "d", "c", "mu", "rho", "h0", "g0"];

const SOLVER_KEYS: [&str; 11] = [
    "n_u",
    "n_v",
    "dt_init",
    "dt_max",
    "t_end",
    "cfl_front",
    "snapshot_every",
    "series_every",
    "vanish_eps",
    "growth_window",
    "bound_slack",
];

const OTHER_KEYS: [&str; 5] = ["u0", "v0", "output_dir", "seed", "workers"];

/// Samples used when a cosine family is requested.
pub const PROFILE_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    /// `amp * cos(pi x / (2 r))` on `[0, r]`.
    Cosine(f64),
    /// Two-column `x,value` file sampled uniformly, last row at the front.
    Csv(PathBuf),
}

impl ProfileSpec {
    pub fn build(&self, radius: f64) -> Result<Profile> {
        match self {
            ProfileSpec::Cosine(a) => Profile::cosine(radius, *a, PROFILE_SAMPLES),
            ProfileSpec::Csv(path) => {
                let p = crate::io::read_profile_csv(path)?;
                let tol = 1e-9 * radius.max(1.0);
                if (p.radius() - radius).abs() > tol {
                    return Err(Error::Validation(format!(
                        "profile {} ends at {} but the front is {}",
                        path.display(),
                        p.radius(),
                        radius
                    )));
                }
                Ok(p)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub u0: ProfileSpec,
    pub v0: ProfileSpec,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub workers: usize,
    /// Sweep axes in file order.
    pub sweep: Vec<(String, Vec<f64>)>,
}

impl RunConfig {
    pub fn initial_data(&self) -> Result<InitialData> {
        let init = InitialData::new(self.u0.build(self.params.h0)?, self.v0.build(self.params.g0)?);
        init.check_against(&self.params)?;
        Ok(init)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_in(&text, base)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_in(text, Path::new("."))
}

pub fn parse_config_in(text: &str, base_dir: &Path) -> Result<RunConfig> {
    // key -> (line, raw value)
    let mut seen: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut order = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, got `{body}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if !known_key(k) {
            return Err(Error::Parse { line, msg: format!("unknown key `{k}`") });
        }
        if v.is_empty() {
            return Err(Error::Parse { line, msg: format!("missing value for `{k}`") });
        }
        if let Some((first, _)) = seen.get(k) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{k}` (lines {first} and {line})"),
            });
        }
        seen.insert(k.to_string(), (line, v.to_string()));
        order.push(k.to_string());
    }

    let num = |k: &str| -> Result<Option<f64>> {
        match seen.get(k) {
            None => Ok(None),
            Some((line, v)) => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                line: *line,
                msg: format!("`{k}` expects a number, got `{v}`"),
            }),
        }
    };
    let int = |k: &str| -> Result<Option<u64>> {
        match seen.get(k) {
            None => Ok(None),
            Some((line, v)) => v.parse::<u64>().map(Some).map_err(|_| Error::Parse {
                line: *line,
                msg: format!("`{k}` expects a nonnegative integer, got `{v}`"),
            }),
        }
    };

    let mut model = [0.0; 9];
    for (slot, k) in model.iter_mut().zip(MODEL_KEYS) {
        *slot = num(k)?.ok_or_else(|| Error::Validation(format!("missing required key `{k}`")))?;
    }
    let [lambda, b, m, d, c, mu, rho, h0, g0] = model;
    let params = ModelParams { lambda, b, m, d, c, mu, rho, h0, g0 };
    params.validate().map_err(as_validation)?;

    let mut solver = SolverConfig::default();
    if let Some(n) = int("n_u")? {
        solver.n_u = n as usize;
    }
    if let Some(n) = int("n_v")? {
        solver.n_v = n as usize;
    }
    let floats: [(&str, &mut f64); 9] = [
        ("dt_init", &mut solver.dt_init),
        ("dt_max", &mut solver.dt_max),
        ("t_end", &mut solver.t_end),
        ("cfl_front", &mut solver.cfl_front),
        ("snapshot_every", &mut solver.snapshot_every),
        ("series_every", &mut solver.series_every),
        ("vanish_eps", &mut solver.vanish_eps),
        ("growth_window", &mut solver.growth_window),
        ("bound_slack", &mut solver.bound_slack),
    ];
    for (k, slot) in floats {
        if let Some(x) = num(k)? {
            *slot = x;
        }
    }
    solver.validate().map_err(as_validation)?;

    let profile = |k: &str| -> Result<ProfileSpec> {
        let Some((line, v)) = seen.get(k) else {
            return Ok(ProfileSpec::Cosine(1.0));
        };
        let mut it = v.splitn(2, char::is_whitespace);
        let kind = it.next().unwrap_or("");
        let arg = it.next().map(str::trim).unwrap_or("");
        match kind {
            "cosine" => {
                let a: f64 = arg.parse().map_err(|_| Error::Parse {
                    line: *line,
                    msg: format!("`{k} = cosine <amplitude>` expects a number, got `{arg}`"),
                })?;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Validation(format!("{k} amplitude must be positive")));
                }
                Ok(ProfileSpec::Cosine(a))
            }
            "csv" if !arg.is_empty() => Ok(ProfileSpec::Csv(base_dir.join(arg))),
            _ => Err(Error::Parse {
                line: *line,
                msg: format!("`{k}` expects `cosine <amplitude>` or `csv <path>`"),
            }),
        }
    };
    let u0 = profile("u0")?;
    let v0 = profile("v0")?;

    let output_dir = seen
        .get("output_dir")
        .map(|(_, v)| base_dir.join(v))
        .unwrap_or_else(|| PathBuf::from("out"));
    let seed = int("seed")?.unwrap_or(0);
    let workers = int("workers")?.unwrap_or(1) as usize;
    if workers == 0 {
        return Err(Error::Validation("workers must be positive".into()));
    }

    let mut sweep = Vec::new();
    for k in order.iter().filter(|k| k.starts_with("sweep.")) {
        let (line, v) = &seen[k.as_str()];
        let values = v
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse {
                line: *line,
                msg: format!("`{k}` expects a comma-separated list of numbers"),
            })?;
        let name = k["sweep.".len()..].to_string();
        for &x in &values {
            let mut probe = params;
            set_param(&mut probe, &name, x)?;
            probe.validate().map_err(as_validation)?;
        }
        sweep.push((name, values));
    }

    Ok(RunConfig { params, u0, v0, solver, output_dir, seed, workers, sweep })
}

fn known_key(k: &str) -> bool {
    if let Some(p) = k.strip_prefix("sweep.") {
        return MODEL_KEYS.contains(&p);
    }
    MODEL_KEYS.contains(&k) || SOLVER_KEYS.contains(&k) || OTHER_KEYS.contains(&k)
}

fn as_validation(e: Error) -> Error {
    match e {
        Error::InvalidParameter(m) | Error::InvalidInitialData(m) => Error::Validation(m),
        other => other,
    }
}

pub fn set_param(p: &mut ModelParams, name: &str, value: f64) -> Result<()> {
    let slot = match name {
        "lambda" => &mut p.lambda,
        "b" => &mut p.b,
        "m" => &mut p.m,
        "d" => &mut p.d,
        "c" => &mut p.c,
        "mu" => &mut p.mu,
        "rho" => &mut p.rho,
        "h0" => &mut p.h0,
        "g0" => &mut p.g0,
        _ => return Err(Error::Validation(format!("unknown model parameter `{name}`"))),
    };
    *slot = value;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "lambda = 2\nb = 1\nm = 1\nd = 1\nc = 1\nmu = 5\nrho = 5\nh0 = 2\ng0 = 2\n";

    #[test]
    fn minimal_file_uses_solver_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.params.lambda, 2.0);
        assert_eq!(cfg.solver, SolverConfig::default());
        assert_eq!(cfg.u0, ProfileSpec::Cosine(1.0));
        assert!(cfg.sweep.is_empty());
    }

    #[test]
    fn negative_lambda() {
        let text = MINIMAL.replace("lambda = 2", "lambda = -1");
        let e = parse_config(&text).unwrap_err();
        assert!(matches!(&e, Error::Validation(m) if m == "lambda must be positive"), "{e}");
    }

    #[test]
    fn duplicate_names_both_lines() {
        let text = format!("{MINIMAL}# again\nmu = 3\n");
        let e = parse_config(&text).unwrap_err();
        match e {
            Error::Parse { line, msg } => {
                assert_eq!(line, 11);
                assert!(msg.contains("lines 6 and 11"), "{msg}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_key_is_an_error() {
        let text = format!("{MINIMAL}gamma = 1\n");
        assert!(matches!(parse_config(&text), Err(Error::Parse { line: 10, .. })));
        let text = format!("{MINIMAL}sweep.n_u = 64\n");
        assert!(matches!(parse_config(&text), Err(Error::Parse { line: 10, .. })));
    }

    #[test]
    fn missing_model_key() {
        let text = MINIMAL.replace("rho = 5\n", "");
        assert!(matches!(parse_config(&text), Err(Error::Validation(m)) if m.contains("rho")));
    }

    #[test]
    fn comments_profiles_and_sweeps() {
        let text = format!(
            "{MINIMAL}u0 = cosine 0.5  # half height\nn_u = 128\nsweep.mu = 0.1, 1,10\nsweep.b = 0,1\n"
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.u0, ProfileSpec::Cosine(0.5));
        assert_eq!(cfg.solver.n_u, 128);
        assert_eq!(cfg.sweep[0], ("mu".to_string(), vec![0.1, 1.0, 10.0]));
        assert_eq!(cfg.sweep[1].0, "b");
    }

    #[test]
    fn invalid_sweep_value() {
        let text = format!("{MINIMAL}sweep.m = 1, -2\n");
        assert!(matches!(parse_config(&text), Err(Error::Validation(m)) if m == "m must be positive"));
    }

    #[test]
    fn bad_solver_knob() {
        let text = format!("{MINIMAL}n_u = 8\n");
        assert!(matches!(parse_config(&text), Err(Error::Validation(_))));
    }
}
