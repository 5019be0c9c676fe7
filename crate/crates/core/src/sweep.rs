//! Cartesian-product parameter sweeps run on a bounded pool of threads.
//!
//! Each run is sequential; the pool only decides which thread executes it.
//! Rows are keyed by their product index and sorted before output, so the
//! summary does not depend on the worker count.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::config::{set_param, RunConfig};
use crate::diagnostics::{classify_outcome, estimate_speed, Outcome, OutcomeReport};
use crate::error::Result;
use crate::io::{fmt_f64, write_table};
use crate::model::{InitialData, ModelParams};
use crate::solver::{run, SolverConfig, Trajectory};

/// Tail fraction used for the speed columns.
pub const FIT_FRACTION: f64 = 0.25;

/// One point of the product, in axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub index: usize,
    pub values: Vec<f64>,
    pub params: ModelParams,
}

/// Row-major product over the axes; the last axis varies fastest.
pub fn cartesian(base: &ModelParams, axes: &[(String, Vec<f64>)]) -> Result<Vec<SweepPoint>> {
    let total: usize = axes.iter().map(|(_, v)| v.len()).product();
    let mut out = Vec::with_capacity(total);
    for index in 0..total {
        let mut rem = index;
        let mut values = vec![0.0; axes.len()];
        for (k, (_, vals)) in axes.iter().enumerate().rev() {
            values[k] = vals[rem % vals.len()];
            rem /= vals.len();
        }
        let mut params = *base;
        for ((name, _), &x) in axes.iter().zip(&values) {
            set_param(&mut params, name, x)?;
        }
        params.validate()?;
        out.push(SweepPoint { index, values, params });
    }
    Ok(out)
}

/// Outcome and tail statistics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub report: OutcomeReport,
    /// NaN when the tail is too short to fit.
    pub h_speed: f64,
    pub g_speed: f64,
    pub u_final_0: f64,
    pub v_final_0: f64,
}

pub fn summarize(traj: &Trajectory, p: &ModelParams, cfg: &SolverConfig) -> Result<RunSummary> {
    let report = classify_outcome(traj, p, cfg)?;
    let speed = |front: &[f64]| {
        estimate_speed(&traj.times, front, FIT_FRACTION)
            .map(|e| e.value)
            .unwrap_or(f64::NAN)
    };
    Ok(RunSummary {
        report,
        h_speed: speed(&traj.h_series),
        g_speed: speed(&traj.g_series),
        u_final_0: traj.u0_series.last().copied().unwrap_or(f64::NAN),
        v_final_0: traj.v0_series.last().copied().unwrap_or(f64::NAN),
    })
}

#[derive(Debug)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub result: Result<RunSummary>,
}

impl SweepRow {
    pub fn outcome(&self) -> Option<Outcome> {
        self.result.as_ref().ok().map(|s| s.report.outcome)
    }
}

/// Runs every point with at most `workers` threads. The initial data is
/// rebuilt per point because sweeping `h0`/`g0` moves the fronts.
pub fn run_sweep(cfg: &RunConfig, workers: usize) -> Result<Vec<SweepRow>> {
    let points = cartesian(&cfg.params, &cfg.sweep)?;
    let next = AtomicUsize::new(0);
    let sink = Mutex::new(Vec::with_capacity(points.len()));
    let workers = workers.clamp(1, points.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(point) = points.get(i) else { break };
                let result = run_point(cfg, &point.params);
                sink.lock().unwrap().push(SweepRow { point: point.clone(), result });
            });
        }
    });
    let mut rows = sink.into_inner().unwrap();
    rows.sort_by_key(|r| r.point.index);
    Ok(rows)
}

fn run_point(cfg: &RunConfig, p: &ModelParams) -> Result<RunSummary> {
    let init = InitialData::new(cfg.u0.build(p.h0)?, cfg.v0.build(p.g0)?);
    init.check_against(p)?;
    let traj = run(p, &init, &cfg.solver)?;
    summarize(&traj, p, &cfg.solver)
}

/// Summary CSV: swept parameters, then outcome columns. Failed runs keep
/// their row with outcome `failed`.
pub fn write_summary(path: &Path, axes: &[(String, Vec<f64>)], rows: &[SweepRow]) -> Result<()> {
    let mut header: Vec<&str> = axes.iter().map(|(n, _)| n.as_str()).collect();
    header.extend([
        "outcome",
        "prey_verdict",
        "pred_verdict",
        "h_speed",
        "g_speed",
        "u_final_0",
        "v_final_0",
    ]);
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells: Vec<String> = r.point.values.iter().map(|&x| fmt_f64(x)).collect();
            match &r.result {
                Ok(s) => cells.extend([
                    s.report.outcome.as_str().to_string(),
                    s.report.prey.as_str().to_string(),
                    s.report.predator.as_str().to_string(),
                    fmt_f64(s.h_speed),
                    fmt_f64(s.g_speed),
                    fmt_f64(s.u_final_0),
                    fmt_f64(s.v_final_0),
                ]),
                Err(_) => {
                    cells.extend(["failed", "", ""].map(String::from));
                    cells.extend(std::iter::repeat_n(fmt_f64(f64::NAN), 4));
                }
            }
            cells
        })
        .collect();
    write_table(path, &header, &table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn product_order_and_values() {
        let axes = vec![
            ("mu".to_string(), vec![1.0, 2.0]),
            ("b".to_string(), vec![0.0, 0.5, 1.0]),
        ];
        let pts = cartesian(&base(), &axes).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[4].values, vec![2.0, 0.5]);
        assert_eq!((pts[4].params.mu, pts[4].params.b), (2.0, 0.5));
        assert_eq!(pts[4].params.lambda, 2.0);
    }

    #[test]
    fn empty_axes_give_one_point() {
        let pts = cartesian(&base(), &[]).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].params, base());
    }

    #[test]
    fn invalid_point_is_rejected() {
        let axes = vec![("h0".to_string(), vec![1.0])];
        assert!(cartesian(&base(), &axes).is_err());
    }
}
