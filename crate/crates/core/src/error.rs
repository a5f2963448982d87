//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("argument {x} lies outside the domain of {what}")]
    OutOfDomain { what: &'static str, x: f64 },

    #[error("path passes within {distance:e} of singular point {point}")]
    SingularityProximity { point: f64, distance: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {0} steps")]
    TooManySteps(usize),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("tail fit is degenerate: {0}")]
    FitDegenerate(String),

    #[error("tail fit residual {residual:e} exceeds threshold {threshold:e}")]
    FitResidual { residual: f64, threshold: f64 },

    #[error("no sign change in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("coupling too close to critical (nu = {nu:e})")]
    NearCritical { nu: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
