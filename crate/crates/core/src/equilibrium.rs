//! Coexistence equilibrium of the kinetic system
//!
//! ```text
//! lambda - u - b v / (u + m v) = 0,
//! 1 - v + c u / (u + m v)      = 0,
//! ```
//!
//! in closed form, with a damped Newton solve as an independent check.

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// The positive root of the kinetic system together with the intermediates
/// of its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub u_star: f64,
    pub v_star: f64,
    pub a: f64,
    pub delta1: f64,
    /// `0 < m lambda - b < b / c` holds.
    pub regime_ok: bool,
}

impl Equilibrium {
    pub fn residual(&self, p: &ModelParams) -> (f64, f64) {
        kinetic_residual(self.u_star, self.v_star, p)
    }
}

/// `(lambda - u - b v/(u + m v), 1 - v + c u/(u + m v))`.
pub fn kinetic_residual(u: f64, v: f64, p: &ModelParams) -> (f64, f64) {
    let denom = u + p.m * v;
    (
        p.lambda - u - p.b * v / denom,
        1.0 - v + p.c * u / denom,
    )
}

/// Whether `0 < m lambda - b < b / c`.
pub fn in_regime(p: &ModelParams) -> bool {
    let gap = p.prey_margin();
    gap > 0.0 && p.c * gap < p.b
}

/// Closed-form equilibrium. Outside the coexistence regime this returns
/// [`Error::Regime`]; use [`classify_equilibrium`] for a non-failing variant.
pub fn closed_form_equilibrium(p: &ModelParams) -> Result<Equilibrium> {
    if !in_regime(p) {
        return Err(Error::Regime {
            gap: p.prey_margin(),
            limit: if p.c > 0.0 { p.b / p.c } else { f64::INFINITY },
        });
    }
    let (lambda, b, m, c) = (p.lambda, p.b, p.m, p.c);
    let lead = b + c * m * m;
    let a = lambda * (2.0 * c * m * m + b) - m * b * (1.0 + 2.0 * c);
    let delta1 = a * a + 4.0 * lead * (b * (1.0 + c) - m * c * lambda) * (m * lambda - b);
    if delta1 < 0.0 {
        return Err(Error::NegativeDiscriminant(delta1));
    }
    let u_star = (a + delta1.sqrt()) / (2.0 * lead);
    let v_star = u_star * (lambda - u_star) / (b - m * (lambda - u_star));
    Ok(Equilibrium {
        u_star,
        v_star,
        a,
        delta1,
        regime_ok: true,
    })
}

/// Like [`closed_form_equilibrium`] but reports out-of-regime parameters as
/// `regime_ok = false` with NaN values.
pub fn classify_equilibrium(p: &ModelParams) -> Result<Equilibrium> {
    match closed_form_equilibrium(p) {
        Err(Error::Regime { .. }) => Ok(Equilibrium {
            u_star: f64::NAN,
            v_star: f64::NAN,
            a: f64::NAN,
            delta1: f64::NAN,
            regime_ok: false,
        }),
        other => other,
    }
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-12;

/// Damped Newton iteration on the kinetic system from `guess`. Steps are
/// halved until the iterate stays positive and the residual norm drops.
pub fn newton_equilibrium(p: &ModelParams, guess: (f64, f64)) -> Result<(f64, f64)> {
    let (mut u, mut v) = guess;
    if !(u > 0.0 && v > 0.0) {
        return Err(Error::InvalidParameter(
            "newton guess must have positive components".into(),
        ));
    }
    let norm = |r: (f64, f64)| r.0.hypot(r.1);
    let mut res = kinetic_residual(u, v, p);
    for iter in 0..NEWTON_MAX_ITER {
        if norm(res) < NEWTON_TOL {
            return Ok((u, v));
        }
        let s = u + p.m * v;
        let s2 = s * s;
        // partial derivatives of the two residual components
        let f_u = -1.0 + p.b * v / s2;
        let f_v = -p.b * u / s2;
        let g_u = p.c * p.m * v / s2;
        let g_v = -1.0 - p.c * p.m * u / s2;
        let det = f_u * g_v - f_v * g_u;
        if det.abs() < 1e-300 || !det.is_finite() {
            return Err(Error::SingularJacobian { u, v });
        }
        let du = -(res.0 * g_v - f_v * res.1) / det;
        let dv = -(f_u * res.1 - res.0 * g_u) / det;

        let mut step = 1.0;
        loop {
            let (un, vn) = (u + step * du, v + step * dv);
            if un > 0.0 && vn > 0.0 {
                let rn = kinetic_residual(un, vn, p);
                if norm(rn) < norm(res) || step < 1e-10 {
                    u = un;
                    v = vn;
                    res = rn;
                    break;
                }
            }
            step *= 0.5;
            if step < 1e-12 {
                return Err(Error::NoConvergence {
                    iterations: iter,
                    residual: norm(res),
                });
            }
        }
    }
    if norm(res) < NEWTON_TOL {
        Ok((u, v))
    } else {
        Err(Error::NoConvergence {
            iterations: NEWTON_MAX_ITER,
            residual: norm(res),
        })
    }
}

/// Newton from the default seed `(lambda / 2, 1)`.
pub fn newton_from_default_seed(p: &ModelParams) -> Result<(f64, f64)> {
    newton_equilibrium(p, (p.lambda / 2.0, 1.0))
}
