//! Semi-wave speeds by shooting.
//!
//! The semi-wave `(q, c)` solves
//!
//! ```text
//! d q'' - c q' + q (theta - q) = 0,   y > 0,
//! q(0) = 0,  q'(0) = c / beta,  q(inf) = theta,  q' > 0,
//! ```
//!
//! with `0 < c < 2 sqrt(theta d)`. Rescaling `y = sqrt(d/theta) s`,
//! `q = theta Q`, `c = sqrt(theta d) C` gives
//!
//! ```text
//! Q'' = C Q' - Q (1 - Q),   Q(0) = 0,  Q'(0) = C / k,  k = theta beta / d,
//! ```
//!
//! so the speed depends on `(beta, d, theta)` only through `sqrt(theta d)` and
//! `k`. For fixed `C` the stable manifold of the saddle `(1, 0)` crosses
//! `Q = 0` at a slope `P*(C)` that decreases from `1/sqrt(3)` (C = 0) to 0
//! (C = 2). Trajectories starting above it overshoot `Q = 1`; those below
//! turn back with `Q' < 0`. Bisection on `C` locates `C / k = P*(C)`.

use crate::error::{Error, Result};
use crate::ode::{self, Control, Tolerance};

const OVERSHOOT_MARGIN: f64 = 1e-9;
const INITIAL_HORIZON: f64 = 50.0;
const HORIZON_DOUBLINGS: usize = 3;
/// Endpoint offset of the shooting interval in units of `sqrt(theta d)`.
const ENDPOINT_EPS: f64 = 1e-9;

/// Parameters `(beta, d, theta)` of the semi-wave problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiWaveQuery {
    pub beta: f64,
    pub d: f64,
    pub theta: f64,
}

impl SemiWaveQuery {
    pub fn new(beta: f64, d: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("d", d), ("theta", theta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        Ok(Self { beta, d, theta })
    }

    /// `sqrt(theta d)`, the natural speed unit.
    pub fn speed_scale(&self) -> f64 {
        (self.theta * self.d).sqrt()
    }

    /// Dimensionless capacity `theta beta / d`.
    pub fn ratio(&self) -> f64 {
        self.theta * self.beta / self.d
    }
}

/// Speed and profile of a semi-wave.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiWaveSolution {
    pub query: SemiWaveQuery,
    /// Speed `c(beta, d, theta)`.
    pub c: f64,
    /// Profile abscissae, `y[0] = 0`, ending at `y_max`.
    pub y: Vec<f64>,
    /// Profile values `q(y)`, strictly increasing towards `theta`.
    pub q: Vec<f64>,
    pub y_max: f64,
    /// `|q(y_max) - theta|`.
    pub residual: f64,
}

/// Knobs of the shooting iteration. The defaults suit every documented use;
/// tests tighten `ode_rtol` to check self-convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Relative tolerance of the trajectory integration. `None` derives it
    /// from the requested speed tolerance.
    pub ode_rtol: Option<f64>,
    /// First integration horizon in rescaled units.
    pub horizon: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            ode_rtol: None,
            horizon: INITIAL_HORIZON,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fate {
    /// `Q` exceeds 1: the trial speed is too large.
    Overshoot,
    /// `Q'` turns negative below 1: the trial speed is too small.
    Turnaround,
    /// Neither happened before the horizon.
    Undetermined,
}

fn rhs(speed: f64) -> impl Fn(&ode::State) -> ode::State {
    move |s| [s[1], speed * s[1] - s[0] * (1.0 - s[0])]
}

fn fate(speed: f64, ratio: f64, horizon: f64, tol: Tolerance) -> Fate {
    let mut out = Fate::Undetermined;
    ode::integrate(rhs(speed), [0.0, speed / ratio], horizon, tol, |_, s| {
        if s[0] > 1.0 + OVERSHOOT_MARGIN {
            out = Fate::Overshoot;
            Control::Stop
        } else if s[1] < 0.0 && s[0] < 1.0 - OVERSHOOT_MARGIN {
            out = Fate::Turnaround;
            Control::Stop
        } else {
            Control::Continue
        }
    });
    out
}

/// Classifies a trial speed, extending the horizon when the trajectory is
/// still undecided. Returns the fate and the horizon that settled it.
fn settle(speed: f64, ratio: f64, horizon: f64, tol: Tolerance) -> (Fate, f64) {
    let mut h = horizon;
    for _ in 0..=HORIZON_DOUBLINGS {
        match fate(speed, ratio, h, tol) {
            Fate::Undetermined => h *= 2.0,
            other => return (other, h),
        }
    }
    (Fate::Undetermined, h / 2.0)
}

/// Solves the semi-wave problem to relative speed tolerance `tol`.
pub fn solve_semiwave(query: SemiWaveQuery, tol: f64) -> Result<SemiWaveSolution> {
    solve_semiwave_with(query, tol, ShootingOptions::default())
}

pub fn solve_semiwave_with(
    query: SemiWaveQuery,
    tol: f64,
    opts: ShootingOptions,
) -> Result<SemiWaveSolution> {
    let query = SemiWaveQuery::new(query.beta, query.d, query.theta)?;
    if !(tol > 1e-14 && tol < 1e-2) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (1e-14, 1e-2), got {tol}"
        )));
    }
    let rtol = opts.ode_rtol.unwrap_or((tol * 1e-3).clamp(1e-13, 1e-8));
    let ode_tol = Tolerance {
        rtol,
        atol: rtol * 1e-2,
    };
    let ratio = query.ratio();

    let mut lo = ENDPOINT_EPS;
    let mut hi = 2.0 - ENDPOINT_EPS;
    let (f_lo, _) = settle(lo, ratio, opts.horizon, ode_tol);
    let (f_hi, h_hi) = settle(hi, ratio, opts.horizon, ode_tol);
    if f_lo != Fate::Turnaround || f_hi != Fate::Overshoot {
        return Err(Error::NoBracket {
            upper: 2.0 * query.speed_scale(),
            horizon: h_hi,
        });
    }

    while hi - lo > tol * 0.25 * (hi + lo) && hi - lo > 4.0 * f64::EPSILON {
        let mid = 0.5 * (lo + hi);
        match settle(mid, ratio, opts.horizon, ode_tol).0 {
            Fate::Overshoot => hi = mid,
            Fate::Turnaround => lo = mid,
            // on the separatrix to integration accuracy
            Fate::Undetermined => {
                lo = mid;
                hi = mid;
            }
        }
    }
    let speed = 0.5 * (lo + hi);
    let (s, big_q) = profile(speed, ratio, opts.horizon, ode_tol);

    let y_scale = (query.d / query.theta).sqrt();
    let y: Vec<f64> = s.iter().map(|s| s * y_scale).collect();
    let q: Vec<f64> = big_q.iter().map(|v| v * query.theta).collect();
    let y_max = *y.last().expect("profile is never empty");
    let residual = (q.last().expect("profile is never empty") - query.theta).abs();
    Ok(SemiWaveSolution {
        query,
        c: speed * query.speed_scale(),
        y,
        q,
        y_max,
        residual,
    })
}

/// Rescaled profile `(s, Q)`: the integrated trajectory up to its closest
/// approach to the saddle `(1, 0)`, continued along the linear stable
/// direction until `1 - Q < 1e-12`.
fn profile(speed: f64, ratio: f64, horizon: f64, tol: Tolerance) -> (Vec<f64>, Vec<f64>) {
    let mut samples: Vec<(f64, f64, f64)> = Vec::new();
    ode::integrate(
        rhs(speed),
        [0.0, speed / ratio],
        horizon * (1 << HORIZON_DOUBLINGS) as f64,
        tol,
        |t, st| {
            if st[1] <= 0.0 && t > 0.0 || st[0] >= 1.0 {
                return Control::Stop;
            }
            samples.push((t, st[0], st[1]));
            Control::Continue
        },
    );
    let closest = samples
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (1.0 - a.1 .1).hypot(a.1 .2);
            let db = (1.0 - b.1 .1).hypot(b.1 .2);
            da.total_cmp(&db)
        })
        .map(|(i, _)| i)
        .unwrap_or(0);
    samples.truncate(closest + 1);

    let mut s: Vec<f64> = samples.iter().map(|x| x.0).collect();
    let mut q: Vec<f64> = samples.iter().map(|x| x.1).collect();

    // decay rate of the stable eigendirection at (1, 0)
    let decay = 0.5 * ((speed * speed + 4.0).sqrt() - speed);
    let (s_cut, q_cut) = (*s.last().unwrap(), *q.last().unwrap());
    let gap = 1.0 - q_cut;
    if gap > 1e-12 {
        let span = (gap / 1e-12).ln() / decay;
        let n = ((span / 0.05).ceil() as usize).max(1);
        for i in 1..=n {
            let ds = span * i as f64 / n as f64;
            s.push(s_cut + ds);
            q.push(1.0 - gap * (-decay * ds).exp());
        }
    }
    (s, q)
}

impl SemiWaveSolution {
    /// `q(front - x)`, saturating at `theta` beyond `y_max`.
    pub fn profile_wave(&self, x: f64, front: f64) -> Result<f64> {
        if x > front {
            return Err(Error::Domain { x, front });
        }
        let arg = front - x;
        if arg >= self.y_max {
            return Ok(self.query.theta);
        }
        let i = self.y.partition_point(|&y| y <= arg).clamp(1, self.y.len() - 1);
        let (y0, y1) = (self.y[i - 1], self.y[i]);
        let w = (arg - y0) / (y1 - y0);
        Ok(self.q[i - 1] * (1.0 - w) + self.q[i] * w)
    }

    /// `c / sqrt(theta d)`, which lies in `(0, 2)`.
    pub fn normalized_speed(&self) -> f64 {
        self.c / self.query.speed_scale()
    }
}

/// Outcome of [`speed_monotonicity_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub betas: Vec<f64>,
    pub thetas: Vec<f64>,
    /// `speeds[i][j] = c(betas[i], d, thetas[j])`.
    pub speeds: Vec<Vec<f64>>,
    /// Largest `c(previous) - c(next)` along either axis; negative when the
    /// grid is strictly increasing.
    pub max_violation: f64,
    pub violations: usize,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Solves on the grid `betas x thetas` (both sorted ascending) and checks that
/// `c` strictly increases along both axes.
pub fn speed_monotonicity_check(
    betas: &[f64],
    thetas: &[f64],
    d: f64,
    tol: f64,
) -> Result<MonotonicityReport> {
    let mut speeds = Vec::with_capacity(betas.len());
    for &beta in betas {
        let row = thetas
            .iter()
            .map(|&theta| solve_semiwave(SemiWaveQuery::new(beta, d, theta)?, tol).map(|s| s.c))
            .collect::<Result<Vec<_>>>()?;
        speeds.push(row);
    }
    let mut max_violation = f64::NEG_INFINITY;
    let mut violations = 0;
    let mut record = |prev: f64, next: f64| {
        let v = prev - next;
        max_violation = max_violation.max(v);
        if v >= 0.0 {
            violations += 1;
        }
    };
    for i in 0..betas.len() {
        for j in 0..thetas.len() {
            if i + 1 < betas.len() {
                record(speeds[i][j], speeds[i + 1][j]);
            }
            if j + 1 < thetas.len() {
                record(speeds[i][j], speeds[i][j + 1]);
            }
        }
    }
    if max_violation == f64::NEG_INFINITY {
        max_violation = 0.0;
    }
    Ok(MonotonicityReport {
        betas: betas.to_vec(),
        thetas: thetas.to_vec(),
        speeds,
        max_violation,
        violations,
    })
}
