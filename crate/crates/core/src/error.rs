use thiserror::Error;

/// Errors raised by the simulation and evaluation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(#[from] NumericError),
}

/// Quadrature failures, with enough context to diagnose which integral broke.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error(
        "{context}: no convergence after {subdivisions} subdivisions \
         (value {value:e}, error estimate {abs_error:e}, tolerance {tolerance:e})"
    )]
    NoConvergence {
        context: &'static str,
        value: f64,
        abs_error: f64,
        tolerance: f64,
        subdivisions: usize,
    },

    #[error("{context}: integrand returned non-finite value {value} at x = {at}")]
    NonFinite {
        context: &'static str,
        at: f64,
        value: f64,
    },

    #[error("kernel integral diverges for alpha = {0} (requires alpha > 2)")]
    Divergent(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
