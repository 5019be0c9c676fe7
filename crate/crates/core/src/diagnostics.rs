//! Post-processing of trajectories: speed fits, outcome classification and
//! checks of the asymptotic statements (ray regions, speed brackets).
//!
//! All limits in `t`, `mu` or `rho` are checked as finite-scale trends on a
//! tail window, never as equalities.

use std::f64::consts::FRAC_PI_2;

use crate::equilibrium::classify_equilibrium;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::semiwave::{solve_semiwave, SemiWaveQuery};
use crate::solver::{classify_front, FrontEvidence, SimState, SolverConfig, Trajectory, Verdict};

const SPEED_TOL: f64 = 1e-9;

/// Least-squares line through the tail of a front trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedEstimate {
    /// Slope of the fit.
    pub value: f64,
    pub window: (f64, f64),
    pub r2: f64,
    /// Intercept of the fit.
    pub h_est: f64,
}

/// Fits `front ~ value t + h_est` on samples with `t >= (1 - fit_fraction) t_last`.
pub fn estimate_speed(times: &[f64], front: &[f64], fit_fraction: f64) -> Result<SpeedEstimate> {
    if times.len() != front.len() {
        return Err(Error::InsufficientData("times and positions differ in length".into()));
    }
    if !(fit_fraction > 0.0 && fit_fraction <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "fit_fraction must lie in (0, 0.5], got {fit_fraction}"
        )));
    }
    let Some(&t_last) = times.last() else {
        return Err(Error::InsufficientData("empty series".into()));
    };
    let start = times.partition_point(|&t| t < (1.0 - fit_fraction) * t_last);
    let (t, y) = (&times[start..], &front[start..]);
    if t.len() < 20 {
        return Err(Error::InsufficientData(format!(
            "{} samples in the tail window, need at least 20",
            t.len()
        )));
    }
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        sxx += (a - mt) * (a - mt);
        sxy += (a - mt) * (b - my);
        syy += (b - my) * (b - my);
    }
    let value = sxy / sxx;
    let h_est = my - value * mt;
    let sse: f64 = t
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (value * a + h_est)).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(SpeedEstimate {
        value,
        window: (t[0], *t.last().unwrap()),
        r2,
        h_est,
    })
}

/// Closed-form speed constants of the coupled model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedConstants {
    /// `2 sqrt(lambda - b/m)`, when `m lambda > b`.
    pub c1: Option<f64>,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    /// `2 sqrt(lambda - b kappa / (1 + m kappa))`, when `m lambda > b`.
    pub c5: Option<f64>,
    /// `min(c1, c3)`, when `c1` exists.
    pub c0: Option<f64>,
    /// `2 M2 / (lambda - b/m)`, when `m lambda > b`.
    pub kappa: Option<f64>,
}

impl SpeedConstants {
    /// `m2` is the predator density bound of the run (it fixes `kappa`).
    pub fn new(p: &ModelParams, m2: f64) -> Self {
        let floor = p.prey_floor_growth();
        let (c1, kappa, c5) = if floor > 0.0 {
            let kappa = 2.0 * m2 / floor;
            let g5 = p.lambda - p.b * kappa / (1.0 + p.m * kappa);
            (Some(2.0 * floor.sqrt()), Some(kappa), Some(2.0 * g5.sqrt()))
        } else {
            (None, None, None)
        };
        let c3 = 2.0 * p.d.sqrt();
        Self {
            c1,
            c2: 2.0 * p.lambda.sqrt(),
            c3,
            c4: 2.0 * (p.d * (1.0 + p.c)).sqrt(),
            c5,
            c0: c1.map(|c1| c1.min(c3)),
            kappa,
        }
    }

    /// Orderings the constants must satisfy; `Err` names the first one that
    /// fails. Runs whose constants fail are outside the theorems' scope.
    pub fn check_ordering(&self, p: &ModelParams) -> std::result::Result<(), String> {
        let c1 = self.c1.ok_or("m lambda <= b: c1 undefined")?;
        if c1 > self.c2 {
            return Err(format!("c1 = {c1} exceeds c2 = {}", self.c2));
        }
        if self.c3 > self.c4 {
            return Err(format!("c3 = {} exceeds c4 = {}", self.c3, self.c4));
        }
        if p.d * (1.0 + p.c) < p.prey_floor_growth()
            && !(self.c3 < self.c4 && self.c4 < c1 && c1 < self.c2)
        {
            return Err("expected c3 < c4 < c1 < c2 when d(1+c) < lambda - b/m".into());
        }
        if let Some(c5) = self.c5 {
            if !(c1 <= c5 && c5 <= self.c2) {
                return Err(format!("c5 = {c5} outside [c1, c2] = [{c1}, {}]", self.c2));
            }
        }
        Ok(())
    }
}

/// Long-time outcome of a coupled run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    BothSpread,
    PreyOnly,
    PredOnly,
    BothVanish,
    Undecided,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::BothSpread => "both_spread",
            Outcome::PreyOnly => "prey_only",
            Outcome::PredOnly => "pred_only",
            Outcome::BothVanish => "both_vanish",
            Outcome::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

/// Classification of a run with the predicted long-time densities on compact
/// sets. `None` means no closed-form prediction applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeReport {
    pub outcome: Outcome,
    pub prey: Verdict,
    pub predator: Verdict,
    pub predicted_u: Option<f64>,
    pub predicted_v: Option<f64>,
    /// Semi-wave speeds used as the spreading yardstick.
    pub prey_reference_speed: f64,
    pub predator_reference_speed: f64,
}

/// `c(beta, d, theta)`, with `c = 0` for zero capacity.
pub fn semiwave_speed(beta: f64, d: f64, theta: f64) -> Result<f64> {
    if beta == 0.0 {
        return Ok(0.0);
    }
    Ok(solve_semiwave(SemiWaveQuery::new(beta, d, theta)?, SPEED_TOL)?.c)
}

/// Radius beyond which the prey spreads regardless of the data, if any.
pub fn prey_spread_radius(p: &ModelParams) -> Option<f64> {
    (p.prey_margin() > 0.0).then(|| FRAC_PI_2 * (p.m / p.prey_margin()).sqrt())
}

/// Radius beyond which the predator spreads regardless of the data.
pub fn predator_spread_radius(p: &ModelParams) -> f64 {
    FRAC_PI_2 * p.d.sqrt()
}

pub fn classify_outcome(traj: &Trajectory, p: &ModelParams, cfg: &SolverConfig) -> Result<OutcomeReport> {
    if traj.is_single_species() {
        return Err(Error::InvalidParameter(
            "classify_outcome needs a coupled trajectory".into(),
        ));
    }
    let floor = p.prey_floor_growth();
    let prey_speed = semiwave_speed(p.mu, 1.0, if floor > 0.0 { floor } else { p.lambda })?;
    let pred_speed = semiwave_speed(p.rho, p.d, 1.0)?;
    let prey = classify_front(
        &FrontEvidence {
            times: &traj.times,
            front: &traj.h_series,
            max_density: &traj.umax_series,
            nodes: traj.n_u,
            predicted_speed: prey_speed,
            spread_radius: prey_spread_radius(p),
        },
        cfg,
    );
    let predator = classify_front(
        &FrontEvidence {
            times: &traj.times,
            front: &traj.g_series,
            max_density: &traj.vmax_series,
            nodes: traj.n_v,
            predicted_speed: pred_speed,
            spread_radius: Some(predator_spread_radius(p)),
        },
        cfg,
    );
    use Verdict::*;
    let (outcome, predicted_u, predicted_v) = match (prey, predator) {
        (Spreading, Spreading) => {
            let eq = classify_equilibrium(p)?;
            if eq.regime_ok {
                (Outcome::BothSpread, Some(eq.u_star), Some(eq.v_star))
            } else {
                (Outcome::BothSpread, None, None)
            }
        }
        (Spreading, Vanishing) => (Outcome::PreyOnly, Some(p.lambda), Some(0.0)),
        (Vanishing, Spreading) => (Outcome::PredOnly, Some(0.0), Some(1.0)),
        (Vanishing, Vanishing) => (Outcome::BothVanish, Some(0.0), Some(0.0)),
        _ => (
            Outcome::Undecided,
            (prey == Vanishing).then_some(0.0),
            (predator == Vanishing).then_some(0.0),
        ),
    };
    Ok(OutcomeReport {
        outcome,
        prey,
        predator,
        predicted_u,
        predicted_v,
        prey_reference_speed: prey_speed,
        predator_reference_speed: pred_speed,
    })
}

/// One line of a check report.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseResult {
    pub clause: String,
    pub target: f64,
    pub measured: f64,
    /// Positive when the clause holds with room to spare.
    pub margin: f64,
    /// `None` when the clause does not apply to this run.
    pub pass: Option<bool>,
}

impl ClauseResult {
    fn new(clause: impl Into<String>, target: f64, measured: f64, margin: f64, pass: bool) -> Self {
        Self {
            clause: clause.into(),
            target,
            measured,
            margin,
            pass: Some(pass),
        }
    }

    fn not_applicable(clause: impl Into<String>) -> Self {
        Self {
            clause: clause.into(),
            target: f64::NAN,
            measured: f64::NAN,
            margin: f64::NAN,
            pass: None,
        }
    }

    pub fn pass_label(&self) -> &'static str {
        match self.pass {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "n/a",
        }
    }
}

/// A list of clause results.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub clauses: Vec<ClauseResult>,
}

impl CheckReport {
    /// No applicable clause failed.
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.pass != Some(false))
    }

    pub fn get(&self, clause: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.clause == clause)
    }

    /// Aligned `key = value` text.
    pub fn to_text(&self) -> String {
        let width = self.clauses.iter().map(|c| c.clause.len()).max().unwrap_or(0);
        self.clauses
            .iter()
            .map(|c| {
                format!(
                    "{:<width$} = {:<4} target {:>12.6} measured {:>12.6} margin {:>12.6}\n",
                    c.clause,
                    c.pass_label(),
                    c.target,
                    c.measured,
                    c.margin
                )
            })
            .collect()
    }
}

fn tail_snapshots(traj: &Trajectory) -> Vec<&SimState> {
    let t_end = traj.snapshots.last().map(|s| s.t).unwrap_or(0.0);
    traj.snapshots
        .iter()
        .filter(|s| s.t > 0.0 && s.t >= 0.75 * t_end)
        .collect()
}

fn max_beyond(values: &[f64], front: f64, from: f64) -> f64 {
    let n = values.len();
    (0..n)
        .filter(|&i| front * i as f64 / (n - 1) as f64 >= from)
        .map(|i| values[i])
        .fold(0.0, f64::max)
}

/// Minimum of `f` over grid points of `s` lying in `[lo, hi]`.
fn min_on(x: &[f64], values: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    x.iter()
        .filter(|&&x| x >= lo && x <= hi)
        .map(|&x| values(x))
        .reduce(f64::min)
}

/// Evaluates the ray-region statements on the last quarter of the run:
///
/// * (a) `u = 0` beyond `(c2 + eps) t`, `v = 0` beyond `(c4 + eps) t`;
/// * (b) `u >= lambda - b/m` on `[0, (c1 - eps) t]`, `v >= 1` on `[0, (c3 - eps) t]`;
/// * (c) `v ~ 1` on `((c2 + eps) t, (c3 - eps) t)` when `lambda < d <= 2 sqrt(lambda) + 1`;
/// * (d) the distance to `(u*, v*)` on `[0, (c0 - eps) t]` decreases in time
///   (coexistence regime only).
///
/// At finite capacities the fronts lag the rays, so every inner window is
/// clipped to `[0, front(t) - eps t]`; as the capacities grow the clip stops
/// binding and the clauses become the limiting statements.
///
/// `tol` is the density tolerance of (b) and (c).
pub fn ray_region_check(
    traj: &Trajectory,
    p: &ModelParams,
    consts: &SpeedConstants,
    eps: f64,
    tol: f64,
) -> Result<CheckReport> {
    if traj.is_single_species() {
        return Err(Error::InvalidParameter("ray checks need a coupled trajectory".into()));
    }
    let snaps = tail_snapshots(traj);
    if snaps.is_empty() {
        return Err(Error::InsufficientData("no snapshots in the last quarter".into()));
    }
    let mut out = Vec::new();

    // (a)
    let u_out = snaps
        .iter()
        .map(|s| max_beyond(&s.u, s.h, (consts.c2 + eps) * s.t))
        .fold(0.0, f64::max);
    out.push(ClauseResult::new("a_prey_zero_beyond_c2", 0.0, u_out, -u_out, u_out == 0.0));
    let v_out = snaps
        .iter()
        .map(|s| max_beyond(&s.v, s.g, (consts.c4 + eps) * s.t))
        .fold(0.0, f64::max);
    out.push(ClauseResult::new("a_pred_zero_beyond_c4", 0.0, v_out, -v_out, v_out == 0.0));

    // (b)
    match consts.c1 {
        Some(c1) => {
            let target = p.prey_floor_growth();
            let measured = snaps
                .iter()
                .filter_map(|s| min_on(&s.prey_x(), |x| s.u_at(x), 0.0, ((c1 - eps) * s.t).min(s.h - eps * s.t)))
                .fold(f64::INFINITY, f64::min);
            out.push(ClauseResult::new(
                "b_prey_floor_inside_c1",
                target,
                measured,
                measured - (target - tol),
                measured >= target - tol,
            ));
        }
        None => out.push(ClauseResult::not_applicable("b_prey_floor_inside_c1")),
    }
    let measured = snaps
        .iter()
        .filter_map(|s| min_on(&s.predator_x(), |x| s.v_at(x), 0.0, ((consts.c3 - eps) * s.t).min(s.g - eps * s.t)))
        .fold(f64::INFINITY, f64::min);
    out.push(ClauseResult::new(
        "b_pred_floor_inside_c3",
        1.0,
        measured,
        measured - (1.0 - tol),
        measured >= 1.0 - tol,
    ));

    // (c)
    if p.lambda < p.d && p.d <= 2.0 * p.lambda.sqrt() + 1.0 {
        let dev = snaps
            .iter()
            .filter_map(|s| {
                let lo = (consts.c2 + eps) * s.t;
                let hi = ((consts.c3 - eps) * s.t).min(s.g - eps * s.t);
                s.predator_x()
                    .iter()
                    .filter(|&&x| x > lo && x < hi)
                    .map(|&x| (s.v_at(x) - 1.0).abs())
                    .reduce(f64::max)
            })
            .fold(0.0, f64::max);
        out.push(ClauseResult::new("c_pred_only_band", 0.0, dev, tol - dev, dev <= tol));
    } else {
        out.push(ClauseResult::not_applicable("c_pred_only_band"));
    }

    // (d)
    let eq = classify_equilibrium(p)?;
    match (eq.regime_ok, consts.c0) {
        (true, Some(c0)) => {
            let dist: Vec<f64> = snaps
                .iter()
                .map(|s| {
                    let reach = (c0 - eps) * s.t;
                    let reach_u = reach.min(s.h - eps * s.t);
                    let reach_v = reach.min(s.g - eps * s.t);
                    let du = s
                        .prey_x()
                        .iter()
                        .filter(|&&x| x <= reach_u)
                        .map(|&x| (s.u_at(x) - eq.u_star).abs())
                        .fold(0.0, f64::max);
                    let dv = s
                        .predator_x()
                        .iter()
                        .filter(|&&x| x <= reach_v)
                        .map(|&x| (s.v_at(x) - eq.v_star).abs())
                        .fold(0.0, f64::max);
                    du.max(dv)
                })
                .collect();
            let worst_increase = dist
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::NEG_INFINITY, f64::max);
            let worst_increase = if worst_increase.is_finite() { worst_increase } else { 0.0 };
            out.push(ClauseResult::new(
                "d_approach_equilibrium",
                0.0,
                *dist.last().unwrap(),
                -worst_increase,
                worst_increase <= 1e-9,
            ));
        }
        _ => out.push(ClauseResult::not_applicable("d_approach_equilibrium")),
    }
    Ok(CheckReport { clauses: out })
}

/// Semi-wave brackets of the asymptotic front speeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBrackets {
    /// `[c(mu, 1, lambda - b/m), c(mu, 1, lambda)]`.
    pub prey: (f64, f64),
    /// `[c(rho, d, 1), c(rho, d, 1 + c)]`.
    pub predator: (f64, f64),
}

pub fn speed_brackets(p: &ModelParams) -> Result<SpeedBrackets> {
    let floor = p.prey_floor_growth();
    if floor <= 0.0 {
        return Err(Error::InvalidParameter(
            "speed brackets need m lambda > b".into(),
        ));
    }
    Ok(SpeedBrackets {
        prey: (semiwave_speed(p.mu, 1.0, floor)?, semiwave_speed(p.mu, 1.0, p.lambda)?),
        predator: (semiwave_speed(p.rho, p.d, 1.0)?, semiwave_speed(p.rho, p.d, 1.0 + p.c)?),
    })
}

/// Checks the tail-fit front speeds against the semi-wave brackets, each
/// widened by `margin` (relative).
pub fn speed_bounds_check(
    traj: &Trajectory,
    p: &ModelParams,
    fit_fraction: f64,
    margin: f64,
) -> Result<CheckReport> {
    let br = speed_brackets(p)?;
    let h = estimate_speed(&traj.times, &traj.h_series, fit_fraction)?;
    let g = estimate_speed(&traj.times, &traj.g_series, fit_fraction)?;
    let mut out = Vec::new();
    for (name, est, (lo, hi)) in [("prey_speed", h.value, br.prey), ("pred_speed", g.value, br.predator)] {
        let (lo_w, hi_w) = (lo * (1.0 - margin), hi * (1.0 + margin));
        out.push(ClauseResult::new(
            format!("{name}_lower"),
            lo_w,
            est,
            est - lo_w,
            est >= lo_w,
        ));
        out.push(ClauseResult::new(
            format!("{name}_upper"),
            hi_w,
            est,
            hi_w - est,
            est <= hi_w,
        ));
    }
    Ok(CheckReport { clauses: out })
}

/// Whether `|u(t, 0) - target|` shrinks over the last half of the series.
pub fn approaches(series: &[f64], target: f64) -> bool {
    let n = series.len();
    if n < 4 {
        return false;
    }
    let half = &series[n / 2..];
    (half.last().unwrap() - target).abs() <= (half[0] - target).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let t: Vec<f64> = (0..100).map(|k| 0.1 * k as f64).collect();
        let h: Vec<f64> = t.iter().map(|t| 3.0 * t + 1.0).collect();
        let e = estimate_speed(&t, &h, 0.5).unwrap();
        assert!((e.value - 3.0).abs() < 1e-12);
        assert!((e.h_est - 1.0).abs() < 1e-10);
        assert!((e.r2 - 1.0).abs() < 1e-12);
        assert!(e.window.0 >= 0.5 * 9.9 - 1e-12);
    }

    #[test]
    fn stalled_front() {
        let t: Vec<f64> = (0..100).map(|k| 0.1 * k as f64).collect();
        let h = vec![2.5; 100];
        let e = estimate_speed(&t, &h, 0.5).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.h_est, 2.5);
    }

    #[test]
    fn too_few_samples() {
        let t: Vec<f64> = (0..30).map(|k| k as f64).collect();
        let h = t.clone();
        assert!(matches!(estimate_speed(&t, &h, 0.5), Err(Error::InsufficientData(_))));
        assert!(estimate_speed(&t, &h, 0.8).is_err());
    }

    #[test]
    fn constants_ordering() {
        // d(1 + c) = 0.5 < lambda - b/m = 1
        let p = ModelParams::new(2.0, 1.0, 1.0, 0.25, 1.0, 5.0, 5.0, 2.0, 2.0).unwrap();
        let k = SpeedConstants::new(&p, 2.0);
        assert!((k.c1.unwrap() - 2.0).abs() < 1e-15);
        assert!((k.c2 - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!((k.c3 - 1.0).abs() < 1e-15);
        assert!((k.c4 - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(k.kappa, Some(4.0));
        // lambda - b kappa/(1 + m kappa) = 2 - 4/5
        assert!((k.c5.unwrap() - 2.0 * 1.2f64.sqrt()).abs() < 1e-15);
        assert_eq!(k.c0, Some(1.0));
        k.check_ordering(&p).unwrap();

        let q = ModelParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 5.0, 5.0, 2.0, 2.0).unwrap();
        let k = SpeedConstants::new(&q, 2.0);
        assert!(k.c1.is_none() && k.c5.is_none());
        assert!(k.check_ordering(&q).is_err());
    }

    proptest::proptest! {
        #[test]
        fn shift_moves_intercept_only(shift in -50.0f64..50.0, slope in 0.0f64..3.0) {
            let t: Vec<f64> = (0..60).map(|k| 0.5 * k as f64).collect();
            let h: Vec<f64> = t.iter().map(|t| slope * t + (0.3 * t).sin()).collect();
            let hs: Vec<f64> = h.iter().map(|x| x + shift).collect();
            let a = estimate_speed(&t, &h, 0.5).unwrap();
            let b = estimate_speed(&t, &hs, 0.5).unwrap();
            proptest::prop_assert!((a.value - b.value).abs() < 1e-9);
            proptest::prop_assert!((b.h_est - a.h_est - shift).abs() < 1e-8);
        }
    }
}
