//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by spaces, actions, kernels, estimators and experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("power {k} exceeds the action's guaranteed range |k| <= {max_power}")]
    PowerOverflow { k: i64, max_power: i64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("point lies outside the carrier: {0}")]
    OutsideCarrier(String),

    #[error("binary operation result left the carrier")]
    CarrierEscape,

    #[error("test set has zero design mass")]
    ZeroMassSet,

    #[error("zero denominator: no kernel mass at the evaluation point and eta = 0")]
    ZeroDenominator,

    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
