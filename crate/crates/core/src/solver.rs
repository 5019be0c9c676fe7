//! Front-fixing finite differences for the two-front system and for the
//! single-species logistic free-boundary problem.
//!
//! Each species lives on its own normalised grid `y = x / front(t)` in
//! `[0, 1]`. With front speed `s` the density obeys
//!
//! ```text
//! w_t = D w_yy / front^2 + y (s / front) w_y + f,
//! ```
//!
//! discretised with backward Euler for diffusion and the frame advection
//! (central differences, upwinded when the cell Peclet number exceeds 2),
//! explicit reaction terms and an explicit front update driven by a
//! second-order one-sided boundary gradient. A ghost node reflects the Neumann
//! condition at `y = 0`.

use crate::error::{Error, Result};
use crate::model::{apriori_bounds, front_speed_bound, reaction_terms, InitialData, ModelParams, Profile};
use crate::tridiag;

/// Magnitude of negative undershoot that is clamped silently.
pub const SOLVER_TOL: f64 = 1e-10;
const MAX_HALVINGS: usize = 20;
const DT_GROWTH: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Grid points on the prey (or single-species) domain.
    pub n_u: usize,
    /// Grid points on the predator domain.
    pub n_v: usize,
    pub dt_init: f64,
    /// Upper bound on the time step.
    pub dt_max: f64,
    pub t_end: f64,
    /// Largest front displacement per step, as a fraction of one cell.
    pub cfl_front: f64,
    /// Snapshot cadence (time units); 0 disables snapshots.
    pub snapshot_every: f64,
    /// Time-series cadence (time units).
    pub series_every: f64,
    /// Densities below this count as extinct in the outcome classification.
    pub vanish_eps: f64,
    /// Tail window used by the outcome classification.
    pub growth_window: f64,
    /// Relative slack allowed on the a-priori bounds.
    pub bound_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_u: 256,
            n_v: 256,
            dt_init: 1e-4,
            dt_max: 0.02,
            t_end: 50.0,
            cfl_front: 0.5,
            snapshot_every: 10.0,
            series_every: 0.1,
            vanish_eps: 1e-3,
            growth_window: 10.0,
            bound_slack: 0.01,
        }
    }
}

impl SolverConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Validation(msg.to_string()));
        if self.n_u < 64 || self.n_v < 64 {
            return bad("n_u and n_v must be at least 64");
        }
        if !(self.cfl_front > 0.0 && self.cfl_front <= 0.5) {
            return bad("cfl_front must lie in (0, 0.5]");
        }
        if !(self.dt_init > 0.0) {
            return bad("dt_init must be positive");
        }
        if !(self.dt_max >= self.dt_init) {
            return bad("dt_max must be at least dt_init");
        }
        if !(self.t_end > 0.0) {
            return bad("t_end must be positive");
        }
        if !(self.series_every > 0.0) {
            return bad("series_every must be positive");
        }
        if !(self.snapshot_every >= 0.0) {
            return bad("snapshot_every must be nonnegative");
        }
        if !(self.vanish_eps > 0.0) {
            return bad("vanish_eps must be positive");
        }
        if !(self.growth_window > 0.0 && self.growth_window < self.t_end) {
            return bad("growth_window must lie in (0, t_end)");
        }
        if !(self.bound_slack >= 0.0) {
            return bad("bound_slack must be nonnegative");
        }
        Ok(())
    }

    /// Twice the grid points, half the time steps.
    pub fn refined(&self) -> Self {
        Self {
            n_u: 2 * self.n_u - 1,
            n_v: 2 * self.n_v - 1,
            dt_init: self.dt_init / 2.0,
            dt_max: self.dt_max / 2.0,
            ..*self
        }
    }
}

/// Time, fronts and densities on the normalised grids.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub h: f64,
    pub g: f64,
    /// Prey density at `x = y h`, `y = i / (n_u - 1)`.
    pub u: Vec<f64>,
    /// Predator density at `x = z g`, `z = k / (n_v - 1)`.
    pub v: Vec<f64>,
}

impl SimState {
    pub fn initial(p: &ModelParams, init: &InitialData, cfg: &SolverConfig) -> Self {
        Self {
            t: 0.0,
            h: p.h0,
            g: p.g0,
            u: resample(&init.u0, cfg.n_u),
            v: resample(&init.v0, cfg.n_v),
        }
    }

    /// Prey density at physical position `x` (zero beyond `h`).
    pub fn u_at(&self, x: f64) -> f64 {
        sample(&self.u, self.h, x)
    }

    /// Predator density at physical position `x` (zero beyond `g`).
    pub fn v_at(&self, x: f64) -> f64 {
        sample(&self.v, self.g, x)
    }

    pub fn prey_x(&self) -> Vec<f64> {
        grid(self.u.len(), self.h)
    }

    pub fn predator_x(&self) -> Vec<f64> {
        grid(self.v.len(), self.g)
    }
}

fn grid(n: usize, front: f64) -> Vec<f64> {
    (0..n).map(|i| front * i as f64 / (n - 1) as f64).collect()
}

fn resample(profile: &Profile, n: usize) -> Vec<f64> {
    let r = profile.radius();
    let mut out: Vec<f64> = (0..n)
        .map(|i| profile.eval(r * i as f64 / (n - 1) as f64))
        .collect();
    out[n - 1] = 0.0;
    out
}

/// Piecewise-linear interpolation of grid values on `[0, front]`; zero at and
/// beyond the front.
pub fn sample(values: &[f64], front: f64, x: f64) -> f64 {
    if x >= front || front <= 0.0 {
        return 0.0;
    }
    let n = values.len();
    let s = (x.max(0.0) / front) * (n - 1) as f64;
    let i = (s.floor() as usize).min(n - 2);
    let w = s - i as f64;
    values[i] * (1.0 - w) + values[i + 1] * w
}

/// `w_x` at the front from the last three nodes (second order).
pub fn boundary_slope(values: &[f64], front: f64) -> f64 {
    let n = values.len();
    let dx = front / (n - 1) as f64;
    (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dx)
}

/// Stefan speed `-capacity * w_x(front)`, never negative.
pub fn stefan_speed(values: &[f64], front: f64, capacity: f64) -> f64 {
    if capacity == 0.0 {
        return 0.0;
    }
    (-capacity * boundary_slope(values, front)).max(0.0)
}

/// One implicit diffusion/advection solve on a normalised grid.
///
/// `values` hold the density at `t`; `rates` the explicit reaction terms.
/// The front moves from `front_old` to `front_old + dt * speed`.
fn advance_domain(
    values: &[f64],
    rates: &[f64],
    front_old: f64,
    speed: f64,
    diffusivity: f64,
    dt: f64,
) -> Vec<f64> {
    let n = values.len();
    let dy = 1.0 / (n - 1) as f64;
    let front = front_old + dt * speed;
    let r = dt * diffusivity / (front * front * dy * dy);
    let m = n - 1; // unknowns 0..n-2, node n-1 is the Dirichlet front
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs: Vec<f64> = (0..m).map(|j| values[j] + dt * rates[j]).collect();

    diag[0] = 1.0 + 2.0 * r;
    upper[0] = -2.0 * r;
    for j in 1..m {
        let y = j as f64 * dy;
        let a = y * speed / front;
        let peclet = a * dy * front * front / diffusivity;
        if peclet <= 2.0 {
            let q = dt * a / (2.0 * dy);
            lower[j] = -r + q;
            diag[j] = 1.0 + 2.0 * r;
            upper[j] = -r - q;
        } else {
            let q = dt * a / dy;
            lower[j] = -r;
            diag[j] = 1.0 + 2.0 * r + q;
            upper[j] = -r - q;
        }
    }
    // u[n-1] = 0 contributes nothing to the last row
    upper[m - 1] = 0.0;
    if m == 1 {
        upper[0] = 0.0;
    }
    tridiag::solve(&lower, &diag, &upper, &mut rhs);
    rhs.push(0.0);
    rhs
}

/// Clamps small negative undershoot; returns the most negative value seen.
fn clamp_negative(values: &mut [f64]) -> f64 {
    let mut worst = 0.0_f64;
    for v in values.iter_mut() {
        if *v < 0.0 {
            worst = worst.min(*v);
            *v = 0.0;
        }
    }
    worst
}

fn check_finite(values: &[f64], t: f64, what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteState {
            t,
            what: what.to_string(),
        })
    }
}

/// Admissible step for a front moving at `speed` on `n` nodes.
fn cfl_limit(front: f64, n: usize, speed: f64, cfl: f64) -> f64 {
    if speed > 0.0 {
        cfl * front / (n - 1) as f64 / speed
    } else {
        f64::INFINITY
    }
}

/// Result of one accepted time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: SimState,
    pub dt: f64,
    /// Suggested size of the next step.
    pub dt_next: f64,
    /// Most negative density clamped during the step (0 when none).
    pub undershoot: f64,
}

fn coupled_rates(state: &SimState, p: &ModelParams) -> (Vec<f64>, Vec<f64>) {
    let nu = state.u.len();
    let nv = state.v.len();
    let fu = (0..nu)
        .map(|j| {
            let x = state.h * j as f64 / (nu - 1) as f64;
            reaction_terms(state.u[j], state.v_at(x), p).0
        })
        .collect();
    let fv = (0..nv)
        .map(|k| {
            let x = state.g * k as f64 / (nv - 1) as f64;
            reaction_terms(state.u_at(x), state.v[k], p).1
        })
        .collect();
    (fu, fv)
}

/// Advances the coupled system by at most `dt_wanted`, shrinking the step to
/// respect the front CFL limit. A step whose new front speeds would break the
/// limit by more than a factor two is rejected and retried with half the step.
pub fn step(
    state: &SimState,
    p: &ModelParams,
    cfg: &SolverConfig,
    dt_wanted: f64,
) -> Result<StepOutcome> {
    let sh = stefan_speed(&state.u, state.h, p.mu);
    let sg = stefan_speed(&state.v, state.g, p.rho);
    let mut dt = dt_wanted
        .min(cfl_limit(state.h, state.u.len(), sh, cfg.cfl_front))
        .min(cfl_limit(state.g, state.v.len(), sg, cfg.cfl_front));
    let (fu, fv) = coupled_rates(state, p);

    for _ in 0..=MAX_HALVINGS {
        let mut u = advance_domain(&state.u, &fu, state.h, sh, 1.0, dt);
        let mut v = advance_domain(&state.v, &fv, state.g, sg, p.d, dt);
        let t = state.t + dt;
        check_finite(&u, t, "prey density")?;
        check_finite(&v, t, "predator density")?;
        let undershoot = clamp_negative(&mut u).min(clamp_negative(&mut v));
        let next = SimState {
            t,
            h: state.h + dt * sh,
            g: state.g + dt * sg,
            u,
            v,
        };
        let lim_h = cfl_limit(next.h, next.u.len(), stefan_speed(&next.u, next.h, p.mu), cfg.cfl_front);
        let lim_g = cfl_limit(next.g, next.v.len(), stefan_speed(&next.v, next.g, p.rho), cfg.cfl_front);
        if dt <= 2.0 * lim_h.min(lim_g) {
            let dt_next = (dt * DT_GROWTH).min(cfg.dt_max);
            return Ok(StepOutcome {
                state: next,
                dt,
                dt_next,
                undershoot,
            });
        }
        dt *= 0.5;
    }
    Err(Error::StepRejected { t: state.t, dt })
}

/// Logistic single-species problem `w_t = d w_xx + w (theta - w)` on
/// `[0, s(t)]` with `s' = -beta w_x(t, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticProblem {
    pub theta: f64,
    pub d: f64,
    pub beta: f64,
}

/// Single-species analogue of [`step`]. The state's `v` is ignored.
pub fn step_single(
    state: &SimState,
    prob: &LogisticProblem,
    cfg: &SolverConfig,
    dt_wanted: f64,
) -> Result<StepOutcome> {
    let sh = stefan_speed(&state.u, state.h, prob.beta);
    let mut dt = dt_wanted.min(cfl_limit(state.h, state.u.len(), sh, cfg.cfl_front));
    let rates: Vec<f64> = state.u.iter().map(|&w| w * (prob.theta - w)).collect();
    for _ in 0..=MAX_HALVINGS {
        let mut u = advance_domain(&state.u, &rates, state.h, sh, prob.d, dt);
        let t = state.t + dt;
        check_finite(&u, t, "density")?;
        let undershoot = clamp_negative(&mut u);
        let next = SimState {
            t,
            h: state.h + dt * sh,
            g: 0.0,
            u,
            v: Vec::new(),
        };
        let lim = cfl_limit(next.h, next.u.len(), stefan_speed(&next.u, next.h, prob.beta), cfg.cfl_front);
        if dt <= 2.0 * lim {
            return Ok(StepOutcome {
                state: next,
                dt,
                dt_next: (dt * DT_GROWTH).min(cfg.dt_max),
                undershoot,
            });
        }
        dt *= 0.5;
    }
    Err(Error::StepRejected { t: state.t, dt })
}

/// A breach of an a-priori bound (or of front monotonicity) seen at a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub quantity: &'static str,
    pub value: f64,
    pub bound: f64,
}

/// Bounds a trajectory is checked against while it runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunBounds {
    pub u_max: f64,
    pub v_max: f64,
    pub h_speed: f64,
    pub g_speed: f64,
}

/// Recorded history of a run. Single-species runs leave every predator
/// series empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub h_series: Vec<f64>,
    pub g_series: Vec<f64>,
    pub umax_series: Vec<f64>,
    pub vmax_series: Vec<f64>,
    pub u0_series: Vec<f64>,
    pub v0_series: Vec<f64>,
    /// Instantaneous Stefan speed of the prey front.
    pub h_speed_series: Vec<f64>,
    pub g_speed_series: Vec<f64>,
    pub snapshots: Vec<SimState>,
    pub violations: Vec<Violation>,
    /// `(t, value)` for every clamp of a density below `-10 SOLVER_TOL`.
    pub undershoots: Vec<(f64, f64)>,
    pub steps: usize,
    pub n_u: usize,
    pub n_v: usize,
    pub t_end: f64,
}

impl Trajectory {
    pub fn is_single_species(&self) -> bool {
        self.g_series.is_empty()
    }

    pub fn final_state(&self) -> Option<&SimState> {
        self.snapshots.last()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

struct Recorder {
    traj: Trajectory,
    bounds: RunBounds,
    slack: f64,
    single: bool,
}

impl Recorder {
    fn check(&mut self, t: f64, quantity: &'static str, value: f64, bound: f64) {
        if value > bound * (1.0 + self.slack) {
            self.traj.violations.push(Violation {
                t,
                quantity,
                value,
                bound,
            });
        }
    }

    fn record(&mut self, s: &SimState, h_speed: f64, g_speed: f64) {
        let umax = max_of(&s.u);
        if let (Some(&t_prev), Some(&h_prev)) = (self.traj.times.last(), self.traj.h_series.last()) {
            let dt = s.t - t_prev;
            if s.h < h_prev {
                self.traj.violations.push(Violation {
                    t: s.t,
                    quantity: "h decreasing",
                    value: s.h,
                    bound: h_prev,
                });
            }
            if dt > 0.0 {
                self.check(s.t, "h speed", (s.h - h_prev) / dt, self.bounds.h_speed);
            }
            if !self.single {
                let g_prev = *self.traj.g_series.last().unwrap();
                if s.g < g_prev {
                    self.traj.violations.push(Violation {
                        t: s.t,
                        quantity: "g decreasing",
                        value: s.g,
                        bound: g_prev,
                    });
                }
                if dt > 0.0 {
                    self.check(s.t, "g speed", (s.g - g_prev) / dt, self.bounds.g_speed);
                }
            }
        }
        self.check(s.t, "u max", umax, self.bounds.u_max);
        self.traj.times.push(s.t);
        self.traj.h_series.push(s.h);
        self.traj.umax_series.push(umax);
        self.traj.u0_series.push(s.u[0]);
        self.traj.h_speed_series.push(h_speed);
        if !self.single {
            let vmax = max_of(&s.v);
            self.check(s.t, "v max", vmax, self.bounds.v_max);
            self.traj.g_series.push(s.g);
            self.traj.vmax_series.push(vmax);
            self.traj.v0_series.push(s.v[0]);
            self.traj.g_speed_series.push(g_speed);
        }
    }
}

/// Shared time loop; `advance` performs one step and `speeds` reports the
/// current Stefan speeds of a state.
fn drive<A, S>(
    initial: SimState,
    cfg: &SolverConfig,
    bounds: RunBounds,
    single: bool,
    mut advance: A,
    speeds: S,
) -> Result<Trajectory>
where
    A: FnMut(&SimState, f64) -> Result<StepOutcome>,
    S: Fn(&SimState) -> (f64, f64),
{
    cfg.validate()?;
    let mut rec = Recorder {
        traj: Trajectory {
            n_u: cfg.n_u,
            n_v: cfg.n_v,
            t_end: cfg.t_end,
            ..Default::default()
        },
        bounds,
        slack: cfg.bound_slack,
        single,
    };
    let mut state = initial;
    let (sh, sg) = speeds(&state);
    rec.record(&state, sh, sg);
    if cfg.snapshot_every > 0.0 {
        rec.traj.snapshots.push(state.clone());
    }

    let mut sample_idx = 1usize;
    let mut snap_idx = 1usize;
    let next_sample = |k: usize| (k as f64 * cfg.series_every).min(cfg.t_end);
    let next_snap = |k: usize| {
        if cfg.snapshot_every > 0.0 {
            (k as f64 * cfg.snapshot_every).min(cfg.t_end)
        } else {
            cfg.t_end
        }
    };
    let mut dt = cfg.dt_init;
    let eps = 1e-9 * cfg.series_every;
    while state.t < cfg.t_end - eps {
        let target = next_sample(sample_idx).min(next_snap(snap_idx));
        let wanted = dt.min(target - state.t);
        let out = advance(&state, wanted)?;
        rec.traj.steps += 1;
        if out.undershoot < -10.0 * SOLVER_TOL {
            rec.traj.undershoots.push((out.state.t, out.undershoot));
        }
        // a step shortened to hit a sample time says nothing about the next one
        dt = if out.dt < wanted { out.dt_next } else { out.dt_next.max(dt) };
        state = out.state;
        if state.t >= next_sample(sample_idx) - eps {
            let (sh, sg) = speeds(&state);
            rec.record(&state, sh, sg);
            sample_idx = (state.t / cfg.series_every + 1e-6).floor() as usize + 1;
        }
        if cfg.snapshot_every > 0.0 && state.t >= next_snap(snap_idx) - eps {
            rec.traj.snapshots.push(state.clone());
            snap_idx = (state.t / cfg.snapshot_every + 1e-6).floor() as usize + 1;
        }
    }
    // the final state is always available as the last snapshot
    if rec.traj.snapshots.last().map(|s| s.t) != Some(state.t) {
        rec.traj.snapshots.push(state);
    }
    Ok(rec.traj)
}

/// Runs the coupled system to `cfg.t_end`.
pub fn run(p: &ModelParams, init: &InitialData, cfg: &SolverConfig) -> Result<Trajectory> {
    p.validate()?;
    init.check_against(p)?;
    let b = apriori_bounds(p, init);
    let bounds = RunBounds {
        u_max: b.m1,
        v_max: b.m2,
        h_speed: b.m3,
        g_speed: b.m4,
    };
    let initial = SimState::initial(p, init, cfg);
    drive(
        initial,
        cfg,
        bounds,
        false,
        |s, dt| step(s, p, cfg, dt),
        |s| (stefan_speed(&s.u, s.h, p.mu), stefan_speed(&s.v, s.g, p.rho)),
    )
}

/// Runs the single-species logistic free-boundary problem with initial
/// radius `profile.radius()`.
pub fn run_single_species(
    prob: &LogisticProblem,
    profile: &Profile,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    for (name, v) in [("theta", prob.theta), ("d", prob.d)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} must be positive")));
        }
    }
    if !(prob.beta.is_finite() && prob.beta >= 0.0) {
        return Err(Error::InvalidParameter("beta must be nonnegative".into()));
    }
    let m1 = prob.theta.max(profile.max());
    let bounds = RunBounds {
        u_max: m1,
        v_max: f64::INFINITY,
        h_speed: front_speed_bound(prob.beta, m1, prob.theta, prob.d, profile),
        g_speed: f64::INFINITY,
    };
    let initial = SimState {
        t: 0.0,
        h: profile.radius(),
        g: 0.0,
        u: resample(profile, cfg.n_u),
        v: Vec::new(),
    };
    drive(
        initial,
        cfg,
        bounds,
        true,
        |s, dt| step_single(s, prob, cfg, dt),
        |s| (stefan_speed(&s.u, s.h, prob.beta), 0.0),
    )
}

/// Finite-time verdict for one species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undecided,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Spreading => "spread",
            Verdict::Vanishing => "vanish",
            Verdict::Undecided => "undecided",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

/// Inputs to [`classify_front`] for one species.
#[derive(Debug, Clone, Copy)]
pub struct FrontEvidence<'a> {
    pub times: &'a [f64],
    pub front: &'a [f64],
    pub max_density: &'a [f64],
    pub nodes: usize,
    /// Semi-wave speed the front should approach when spreading.
    pub predicted_speed: f64,
    /// Radius beyond which spreading is certain, if one is known.
    pub spread_radius: Option<f64>,
}

/// Conservative finite-time classification:
///
/// * vanishing: final maximum density below `vanish_eps` and the front moved
///   less than one cell over the last `growth_window`;
/// * spreading: mean front speed over the last `growth_window` above half the
///   predicted semi-wave speed, or the front passed a radius beyond which
///   spreading is guaranteed;
/// * undecided otherwise.
pub fn classify_front(ev: &FrontEvidence<'_>, cfg: &SolverConfig) -> Verdict {
    let (Some(&t_last), Some(&f_last), Some(&m_last)) =
        (ev.times.last(), ev.front.last(), ev.max_density.last())
    else {
        return Verdict::Undecided;
    };
    let t_from = t_last - cfg.growth_window;
    let i0 = ev.times.partition_point(|&t| t < t_from - 1e-9);
    let window = t_last - ev.times[i0];
    let moved = f_last - ev.front[i0];
    let cell = f_last / (ev.nodes - 1) as f64;

    if m_last < cfg.vanish_eps && moved < cell {
        return Verdict::Vanishing;
    }
    if let Some(r) = ev.spread_radius {
        if f_last >= r {
            return Verdict::Spreading;
        }
    }
    if ev.predicted_speed > 0.0 && window > 0.0 && moved / window > 0.5 * ev.predicted_speed {
        return Verdict::Spreading;
    }
    Verdict::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig {
            n_u: 65,
            n_v: 65,
            t_end: 2.0,
            growth_window: 1.0,
            ..Default::default()
        }
    }

    #[test]
    fn sample_is_zero_beyond_front() {
        let v = [1.0, 0.5, 0.0];
        assert_eq!(sample(&v, 2.0, 2.0), 0.0);
        assert_eq!(sample(&v, 2.0, 3.0), 0.0);
        assert_eq!(sample(&v, 2.0, 0.5), 0.75);
    }

    #[test]
    fn boundary_slope_is_exact_for_quadratics() {
        // w = 1 - x^2 on [0, 1]
        let n = 11;
        let w: Vec<f64> = (0..n).map(|i| 1.0 - (i as f64 / 10.0).powi(2)).collect();
        assert!((boundary_slope(&w, 1.0) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_capacity_freezes_fronts() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 2.0, 1.5).unwrap();
        let init = InitialData::cosine(&p, 1.0, 1.0).unwrap();
        let traj = run(&p, &init, &cfg()).unwrap();
        assert!(traj.h_series.iter().all(|&h| h == 2.0));
        assert!(traj.g_series.iter().all(|&g| g == 1.5));
        assert!(traj.violations.is_empty());
    }

    #[test]
    fn boundary_values_stay_zero_and_densities_nonnegative() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 2.0, 1.0).unwrap();
        let init = InitialData::cosine(&p, 1.0, 1.0).unwrap();
        let traj = run(&p, &init, &cfg()).unwrap();
        for s in &traj.snapshots {
            assert_eq!(*s.u.last().unwrap(), 0.0);
            assert_eq!(*s.v.last().unwrap(), 0.0);
            assert!(s.u.iter().chain(&s.v).all(|&x| x >= 0.0));
        }
        assert!(traj.h_series.windows(2).all(|w| w[1] >= w[0]));
        assert!(traj.g_series.windows(2).all(|w| w[1] >= w[0]));
        assert!(traj.violations.is_empty(), "{:?}", traj.violations);
    }

    #[test]
    fn series_land_on_sample_times() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 2.0, 1.0).unwrap();
        let init = InitialData::cosine(&p, 1.0, 1.0).unwrap();
        let traj = run(&p, &init, &cfg()).unwrap();
        assert_eq!(traj.len(), 21);
        for (k, t) in traj.times.iter().enumerate() {
            assert!((t - 0.1 * k as f64).abs() < 1e-9, "{k} {t}");
        }
        assert!((traj.final_state().unwrap().t - 2.0).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.n_u = 10;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.cfl_front = 0.8;
        assert!(c.validate().is_err());
    }

    #[test]
    fn classification_rules() {
        let c = SolverConfig {
            growth_window: 2.0,
            vanish_eps: 1e-3,
            t_end: 10.0,
            ..Default::default()
        };
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let stalled = vec![1.0; 11];
        let tiny = vec![1e-5; 11];
        let ev = FrontEvidence {
            times: &times,
            front: &stalled,
            max_density: &tiny,
            nodes: 65,
            predicted_speed: 1.0,
            spread_radius: None,
        };
        assert_eq!(classify_front(&ev, &c), Verdict::Vanishing);

        let moving: Vec<f64> = times.iter().map(|t| 1.0 + 0.8 * t).collect();
        let big = vec![1.0; 11];
        let ev = FrontEvidence {
            front: &moving,
            max_density: &big,
            ..ev
        };
        assert_eq!(classify_front(&ev, &c), Verdict::Spreading);

        let slow: Vec<f64> = times.iter().map(|t| 1.0 + 0.1 * t).collect();
        let ev = FrontEvidence { front: &slow, ..ev };
        assert_eq!(classify_front(&ev, &c), Verdict::Undecided);
        let ev = FrontEvidence {
            spread_radius: Some(1.5),
            ..ev
        };
        assert_eq!(classify_front(&ev, &c), Verdict::Spreading);
    }
}
