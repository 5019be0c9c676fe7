use thiserror::Error;

/// Errors raised by the numerical routines and the I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid initial data: {0}")]
    InvalidInitialData(String),

    #[error("semi-wave shooting found no bracket for c in (0, {upper}) (horizon {horizon})")]
    NoBracket { upper: f64, horizon: f64 },

    #[error("position {x} lies beyond the front {front}")]
    Domain { x: f64, front: f64 },

    #[error("equilibrium regime 0 < m*lambda - b < b/c does not hold (m*lambda - b = {gap}, b/c = {limit})")]
    Regime { gap: f64, limit: f64 },

    #[error("negative discriminant {0} inside the coexistence regime")]
    NegativeDiscriminant(f64),

    #[error("newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular jacobian at ({u}, {v})")]
    SingularJacobian { u: f64, v: f64 },

    #[error("time step rejected at t = {t}: dt fell below {dt:e} after repeated halving")]
    StepRejected { t: f64, dt: f64 },

    #[error("non-finite state at t = {t} ({what})")]
    NonFiniteState { t: f64, what: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("bad bracket: low classified {low}, high classified {high}")]
    BadBracket { low: String, high: String },

    #[error("inconclusive classification at capacity {beta} after extending t_end to {t_end}")]
    Inconclusive { beta: f64, t_end: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
