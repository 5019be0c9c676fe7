//! Spreading/vanishing thresholds and critical front capacities.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::diagnostics::semiwave_speed;
use crate::error::{Error, Result};
use crate::model::{ModelParams, Profile};
use crate::solver::{classify_front, run_single_species, FrontEvidence, LogisticProblem, SolverConfig, Trajectory, Verdict};

/// Closed-form thresholds for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    /// `(pi/2) sqrt(m / (m lambda - b))`: prey spreads from any `h0` at or
    /// above it. Defined when `m lambda > b`.
    pub prey_spread_radius: Option<f64>,
    /// `(pi/2) sqrt(1 / lambda)`: below it (and for small `mu`) the prey vanishes.
    pub prey_vanish_radius: f64,
    /// `(pi/2) sqrt(d)`.
    pub pred_spread_radius: f64,
    /// `(pi/2) sqrt(d / (1 + c))`.
    pub pred_vanish_radius: f64,
    /// The queried separation speed, if any.
    pub s: Option<f64>,
    /// `2 pi / sqrt(2 lambda - s^2)` for `0 < s < sqrt(2 lambda)`.
    pub l_s: Option<f64>,
    /// `s` lies in `(0, sqrt(2 lambda))`, the range of the separation result.
    pub s_bar_exists: bool,
    /// `lambda^2 + m lambda < b`: prey dies out once the predator spreads.
    pub prey_extinction_regime: bool,
    /// `c(mu, 1, lambda) < c(rho, d, 1)`.
    pub f_membership: bool,
    pub prey_max_speed: f64,
    pub pred_min_speed: f64,
}

impl ThresholdReport {
    /// `(key, value)` pairs in a fixed order; undefined values print as `undefined`.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<f64>| v.map_or("undefined".to_string(), |v| format!("{v:.10}"));
        vec![
            ("prey_spread_radius", opt(self.prey_spread_radius)),
            ("prey_vanish_radius", format!("{:.10}", self.prey_vanish_radius)),
            ("pred_spread_radius", format!("{:.10}", self.pred_spread_radius)),
            ("pred_vanish_radius", format!("{:.10}", self.pred_vanish_radius)),
            ("s", opt(self.s)),
            ("L_s", opt(self.l_s)),
            ("s_bar_exists", self.s_bar_exists.to_string()),
            ("prey_extinction_regime", self.prey_extinction_regime.to_string()),
            ("F_membership", self.f_membership.to_string()),
            ("c(mu,1,lambda)", format!("{:.10}", self.prey_max_speed)),
            ("c(rho,d,1)", format!("{:.10}", self.pred_min_speed)),
        ]
    }

    pub fn to_text(&self) -> String {
        let entries = self.entries();
        let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        entries
            .iter()
            .map(|(k, v)| format!("{k:<width$} = {v}\n"))
            .collect()
    }
}

/// `2 pi / sqrt(2 lambda - s^2)` when `0 < s < sqrt(2 lambda)`.
pub fn separation_gap(lambda: f64, s: f64) -> Option<f64> {
    let disc = 2.0 * lambda - s * s;
    (s > 0.0 && disc > 0.0).then(|| 2.0 * PI / disc.sqrt())
}

pub fn thresholds(p: &ModelParams, s: Option<f64>) -> Result<ThresholdReport> {
    p.validate()?;
    let margin = p.prey_margin();
    let prey_max_speed = semiwave_speed(p.mu, 1.0, p.lambda)?;
    let pred_min_speed = semiwave_speed(p.rho, p.d, 1.0)?;
    let l_s = s.and_then(|s| separation_gap(p.lambda, s));
    Ok(ThresholdReport {
        prey_spread_radius: (margin > 0.0).then(|| FRAC_PI_2 * (p.m / margin).sqrt()),
        prey_vanish_radius: FRAC_PI_2 * (1.0 / p.lambda).sqrt(),
        pred_spread_radius: FRAC_PI_2 * p.d.sqrt(),
        pred_vanish_radius: FRAC_PI_2 * (p.d / (1.0 + p.c)).sqrt(),
        s,
        l_s,
        s_bar_exists: l_s.is_some(),
        prey_extinction_regime: p.lambda * p.lambda + p.m * p.lambda < p.b,
        f_membership: prey_max_speed < pred_min_speed,
        prey_max_speed,
        pred_min_speed,
    })
}

/// Single-species problem whose critical capacity is sought: growth `theta`,
/// diffusivity `d` and initial data `profile` on `[0, s0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySearch {
    pub theta: f64,
    pub d: f64,
    pub profile: Profile,
}

impl CapacitySearch {
    /// `(pi/2) sqrt(d / theta)`.
    pub fn threshold_radius(&self) -> f64 {
        FRAC_PI_2 * (self.d / self.theta).sqrt()
    }

    fn problem(&self, beta: f64) -> LogisticProblem {
        LogisticProblem {
            theta: self.theta,
            d: self.d,
            beta,
        }
    }
}

/// Final bracket of a critical-capacity bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalCapacity {
    /// Largest capacity observed to vanish.
    pub lower: f64,
    /// Smallest capacity observed to spread.
    pub upper: f64,
    pub iterations: usize,
    /// `(beta, verdict)` for every run, in order.
    pub history: Vec<(f64, Verdict)>,
}

impl CriticalCapacity {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Classifies one single-species run, spreading certified once the front
/// passes the threshold radius.
pub fn classify_single(traj: &Trajectory, search: &CapacitySearch, beta: f64, cfg: &SolverConfig) -> Result<Verdict> {
    let predicted = semiwave_speed(beta, search.d, search.theta)?;
    Ok(classify_front(
        &FrontEvidence {
            times: &traj.times,
            front: &traj.h_series,
            max_density: &traj.umax_series,
            nodes: traj.n_u,
            predicted_speed: predicted,
            spread_radius: Some(search.threshold_radius()),
        },
        cfg,
    ))
}

const T_END_DOUBLINGS: usize = 2;

/// Runs at capacity `beta`, doubling `t_end` (at most twice) while the verdict
/// is undecided. Returns the verdict and the `t_end` that produced it.
pub fn verdict_at(search: &CapacitySearch, beta: f64, cfg: &SolverConfig) -> Result<(Verdict, f64)> {
    let mut c = *cfg;
    for attempt in 0..=T_END_DOUBLINGS {
        let traj = run_single_species(&search.problem(beta), &search.profile, &c)?;
        let v = classify_single(&traj, search, beta, &c)?;
        if v != Verdict::Undecided || attempt == T_END_DOUBLINGS {
            return Ok((v, c.t_end));
        }
        c.t_end *= 2.0;
    }
    unreachable!()
}

/// Bisects the front capacity between a vanishing `low` and a spreading
/// `high` endpoint.
pub fn find_critical_capacity(
    search: &CapacitySearch,
    bracket: (f64, f64),
    n_bisect: usize,
    cfg: &SolverConfig,
) -> Result<CriticalCapacity> {
    let (mut lo, mut hi) = bracket;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::InvalidParameter(format!("invalid bracket ({lo}, {hi})")));
    }
    let mut history = Vec::new();
    let (v_lo, _) = verdict_at(search, lo, cfg)?;
    history.push((lo, v_lo));
    let (v_hi, _) = verdict_at(search, hi, cfg)?;
    history.push((hi, v_hi));
    if v_lo != Verdict::Vanishing || v_hi != Verdict::Spreading {
        return Err(Error::BadBracket {
            low: v_lo.to_string(),
            high: v_hi.to_string(),
        });
    }
    for _ in 0..n_bisect {
        let mid = 0.5 * (lo + hi);
        let (v, t_end) = verdict_at(search, mid, cfg)?;
        history.push((mid, v));
        match v {
            Verdict::Spreading => hi = mid,
            Verdict::Vanishing => lo = mid,
            Verdict::Undecided => return Err(Error::Inconclusive { beta: mid, t_end }),
        }
    }
    Ok(CriticalCapacity {
        lower: lo,
        upper: hi,
        iterations: n_bisect,
        history,
    })
}

/// Single-species problems behind the prey's two critical capacities: growth
/// `lambda` (the larger growth, hence the smaller capacity) and growth
/// `lambda - b/m`.
pub fn prey_capacity_searches(p: &ModelParams, u0: &Profile) -> Result<(CapacitySearch, CapacitySearch)> {
    let floor = p.prey_floor_growth();
    if floor <= 0.0 {
        return Err(Error::InvalidParameter("prey capacities need m lambda > b".into()));
    }
    Ok((
        CapacitySearch {
            theta: p.lambda,
            d: 1.0,
            profile: u0.clone(),
        },
        CapacitySearch {
            theta: floor,
            d: 1.0,
            profile: u0.clone(),
        },
    ))
}

/// Predator counterparts: growth `1 + c` and growth `1`, diffusivity `d`.
pub fn predator_capacity_searches(p: &ModelParams, v0: &Profile) -> (CapacitySearch, CapacitySearch) {
    (
        CapacitySearch {
            theta: 1.0 + p.c,
            d: p.d,
            profile: v0.clone(),
        },
        CapacitySearch {
            theta: 1.0,
            d: p.d,
            profile: v0.clone(),
        },
    )
}

/// Outcome of [`check_separation`].
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub applicable: bool,
    pub reason: String,
    pub l_s: Option<f64>,
    /// First sample with `h(t) < s t + g0 + L_s`, as `(t, h, bound)`.
    pub first_violation: Option<(f64, f64, f64)>,
    /// First sample with `h(t) <= g(t)`, as `(t, h, g)`.
    pub first_crossing: Option<(f64, f64, f64)>,
    /// `min_t (h(t) - s t - g0 - L_s)`.
    pub min_margin: f64,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.applicable && self.first_violation.is_none() && self.first_crossing.is_none()
    }
}

/// Checks `h(t) >= s t + g0 + L_s` and `h(t) > g(t)` at every sample.
pub fn check_separation(p: &ModelParams, s: f64, traj: &Trajectory) -> SeparationReport {
    let not_applicable = |reason: String, l_s| SeparationReport {
        applicable: false,
        reason,
        l_s,
        first_violation: None,
        first_crossing: None,
        min_margin: f64::NAN,
    };
    let Some(l_s) = separation_gap(p.lambda, s) else {
        return not_applicable(format!("s = {s} outside (0, sqrt(2 lambda))"), None);
    };
    if p.h0 - p.g0 <= l_s {
        return not_applicable(format!("h0 - g0 = {} does not exceed L_s = {l_s}", p.h0 - p.g0), Some(l_s));
    }
    if traj.is_single_species() {
        return not_applicable("single-species trajectory".into(), Some(l_s));
    }
    let mut first_violation = None;
    let mut first_crossing = None;
    let mut min_margin = f64::INFINITY;
    for ((&t, &h), &g) in traj.times.iter().zip(&traj.h_series).zip(&traj.g_series) {
        let bound = s * t + p.g0 + l_s;
        min_margin = min_margin.min(h - bound);
        if h < bound && first_violation.is_none() {
            first_violation = Some((t, h, bound));
        }
        if h <= g && first_crossing.is_none() {
            first_crossing = Some((t, h, g));
        }
    }
    SeparationReport {
        applicable: true,
        reason: String::new(),
        l_s: Some(l_s),
        first_violation,
        first_crossing,
        min_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lambda: f64, b: f64, m: f64, d: f64, c: f64) -> ModelParams {
        ModelParams::new(lambda, b, m, d, c, 1.0, 1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn closed_form_values() {
        let r = thresholds(&p(2.0, 1.0, 1.0, 1.0, 1.0), Some(1.0)).unwrap();
        assert!((r.prey_spread_radius.unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert!((r.prey_vanish_radius - 1.110721).abs() < 1e-6);
        assert!((r.l_s.unwrap() - 3.627599).abs() < 1e-6);
        assert!((r.pred_spread_radius - FRAC_PI_2).abs() < 1e-15);
        assert!((r.pred_vanish_radius - FRAC_PI_2 / 2f64.sqrt()).abs() < 1e-15);
        assert!(r.s_bar_exists);
        assert!(!r.prey_extinction_regime);
    }

    #[test]
    fn undefined_entries() {
        let r = thresholds(&p(1.0, 2.0, 1.0, 1.0, 1.0), Some(2.0)).unwrap();
        assert!(r.prey_spread_radius.is_none());
        assert!(r.l_s.is_none());
        assert!(!r.s_bar_exists);
        // 1 + 1 < 2 fails: lambda^2 + m lambda = 2 is not below b = 2
        assert!(!r.prey_extinction_regime);
        let r = thresholds(&p(0.5, 1.0, 1.0, 1.0, 1.0), None).unwrap();
        assert!(r.prey_extinction_regime);
        assert!(r.to_text().contains("L_s"));
    }

    #[test]
    fn vanish_radii_below_spread_radii() {
        for (lambda, b, m) in [(2.0, 1.0, 1.0), (1.5, 1.0, 1.0), (3.0, 0.5, 0.4)] {
            let r = thresholds(&p(lambda, b, m, 1.3, 0.7), None).unwrap();
            assert!(r.prey_vanish_radius < r.prey_spread_radius.unwrap());
            assert!(r.pred_vanish_radius < r.pred_spread_radius);
        }
    }

    #[test]
    fn separation_gap_monotone_in_s() {
        let mut last = 0.0;
        for k in 1..20 {
            let l = separation_gap(2.0, 0.1 * k as f64).unwrap();
            assert!(l > last);
            last = l;
        }
        assert!(separation_gap(2.0, 2.0).is_none());
    }

    #[test]
    fn spread_radius_decreases_with_lambda() {
        let mut last = f64::INFINITY;
        for k in 0..10 {
            let r = thresholds(&p(1.2 + 0.3 * k as f64, 1.0, 1.0, 1.0, 1.0), None).unwrap();
            assert!(r.prey_spread_radius.unwrap() < last);
            last = r.prey_spread_radius.unwrap();
        }
    }

    #[test]
    fn f_membership_monotone_in_rho() {
        let mut seen_true = false;
        for k in 0..8 {
            let mut q = p(1.0, 0.5, 1.0, 2.0, 1.0);
            q.rho = 0.25 * 2f64.powi(k);
            let r = thresholds(&q, None).unwrap();
            assert!(!(seen_true && !r.f_membership));
            seen_true |= r.f_membership;
        }
        assert!(seen_true);
    }

    #[test]
    fn separation_not_applicable() {
        let q = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 5.0, 0.1, 3.0, 1.0).unwrap();
        let traj = Trajectory::default();
        let r = check_separation(&q, 1.0, &traj);
        assert!(!r.applicable && !r.passed());
        let r = check_separation(&q, 2.5, &traj);
        assert!(!r.applicable && r.l_s.is_none());
    }
}
