use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-admissible kappa {0}: kappa must not be 0, -1, -2, ...")]
    NonAdmissibleKappa(f64),

    #[error("parameters outside the theorem regime (need c < 0 and kappa > 0): c = {c}, kappa = {kappa}")]
    RegimeViolation { c: f64, kappa: f64 },

    #[error("invalid spiral parameters: alpha = {alpha}, beta = {beta} (need |alpha| < pi/2 and 0 <= beta < 1)")]
    InvalidSpiralParams { alpha: f64, beta: f64 },

    #[error("invalid R^tau(A, B) parameters: {0}")]
    InvalidRtauParams(String),

    #[error("coefficient a_{index} = {value} is negative; a T-class function stores non-negative magnitudes")]
    SignViolation { index: usize, value: f64 },

    #[error("denominator vanishes at z = {z} (|value| = {magnitude:e})")]
    ZeroDenominator { z: Complex64, magnitude: f64 },

    #[error("series did not reach the requested tolerance within {max_terms} terms")]
    NotConverged { max_terms: usize },

    #[error("golden values: {0}")]
    Golden(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
