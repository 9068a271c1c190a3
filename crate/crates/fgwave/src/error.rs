use thiserror::Error;

/// Errors produced by the solver library and the experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter or config key is outside its admissible range.
    #[error("{0}")]
    InvalidParameter(String),

    /// The modified energy E(u) = integral of F(u) + c0 was not positive,
    /// so the auxiliary variable sqrt(E) is undefined.
    #[error("nonpositive modified energy E = {energy}{}", step_suffix(*.step))]
    NonpositiveEnergy { energy: f64, step: Option<usize> },

    /// The requested final time is not an integer multiple of the step size.
    #[error("final time T = {t_final} is not an integer multiple of tau = {tau}")]
    NonIntegerStepCount { t_final: f64, tau: f64 },

    /// Two fields that must share a grid were defined on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Errors were requested between states at different physical times.
    #[error("time mismatch: solution at t = {t_sol}, reference at t = {t_ref}")]
    TimeMismatch { t_sol: f64, t_ref: f64 },

    /// An observed convergence rate was requested for a nonpositive error.
    #[error("observed rate needs positive errors, got {value}")]
    NonpositiveErrorValue { value: f64 },

    /// A damped run produced an energy increase, violating dissipation.
    #[error("discrete energy increased at step {step} despite gamma > 0")]
    DissipationViolation { step: usize },

    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn step_suffix(step: Option<usize>) -> String {
    match step {
        Some(n) => format!(" at step {n}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
