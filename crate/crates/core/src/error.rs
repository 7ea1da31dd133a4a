use thiserror::Error;

/// Errors raised when a law is evaluated outside its domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TelegraphError {
    #[error("switching rates must be positive and finite (got lambda0={lambda0}, lambda1={lambda1})")]
    InvalidRate { lambda0: f64, lambda1: f64 },

    #[error("velocities must satisfy gamma0 > gamma1 (got gamma0={gamma0}, gamma1={gamma1})")]
    VelocityOrder { gamma0: f64, gamma1: f64 },

    #[error("zero velocity is not supported (got gamma0={gamma0}, gamma1={gamma1})")]
    ZeroVelocity { gamma0: f64, gamma1: f64 },

    #[error("{what} must be positive and finite (got {value})")]
    NonPositive { what: &'static str, value: f64 },

    #[error("series argument must be finite and non-negative (got {0})")]
    SeriesArgument(f64),

    #[error("initial state must be 0 or 1 (got {0})")]
    InvalidState(u8),

    #[error("switch count must be at least 1 (got {0}); the no-switch case is an atom")]
    SwitchCount(u32),

    #[error("threshold must be non-zero")]
    ZeroThreshold,

    #[error("operation requires velocities of opposite signs (got {0:?})")]
    RegimeMismatch(crate::params::VelocityRegime),

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, TelegraphError>;
