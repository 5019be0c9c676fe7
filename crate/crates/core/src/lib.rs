//! Numerical laboratory for a ratio-dependent prey-predator reaction-diffusion
//! system in which prey and predator each occupy an interval `[0, h(t)]`,
//! `[0, g(t)]` bounded by its own Stefan free boundary.
//!
//! The crate is organised by capability:
//!
//! * [`model`]: parameters, initial data, reaction terms, a-priori bounds.
//! * [`semiwave`]: shooting solver for the semi-wave problem that fixes the
//!   asymptotic spreading speed `c(beta, d, theta)`.
//! * [`equilibrium`]: closed-form coexistence state with a Newton oracle.
//! * [`solver`]: front-fixing finite differences for the coupled system and
//!   its single-species logistic counterpart.
//! * [`criteria`]: spreading/vanishing thresholds and critical capacities.
//! * [`diagnostics`]: speed fits, outcome classification and checks of the
//!   asymptotic statements on simulated trajectories.
//! * [`config`], [`io`], [`sweep`], [`cli`]: run configuration, CSV files,
//!   parameter sweeps and the `stefan-pp` command line.

pub mod cli;
pub mod config;
pub mod criteria;
pub mod diagnostics;
pub mod equilibrium;
pub mod error;
pub mod io;
pub mod model;
mod ode;
pub mod semiwave;
pub mod solver;
pub mod sweep;
pub mod tridiag;

pub use error::{Error, Result};
pub use model::{InitialData, ModelParams, Profile};
