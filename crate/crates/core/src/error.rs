use thiserror::Error;

use crate::expr::{DomainError, ParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Domain(#[from] DomainError),

    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrand is not finite at {at}: {value}")]
    NonFinite { at: f64, value: f64 },

    #[error("{what} did not converge (best estimate {best})")]
    NotConverged { what: String, best: f64 },

    #[error("{what}: independent evaluations disagree ({primary} vs {oracle})")]
    OracleMismatch {
        what: String,
        primary: f64,
        oracle: f64,
    },

    #[error("expression must depend on a single variable, found both x and y in `{0}`")]
    NotUnivariate(String),
}
