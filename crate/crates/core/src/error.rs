use thiserror::Error;

use crate::quadrature::QuadError;

/// Errors raised by the model, spectrum and evolution routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be non-negative (got {value})")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} is not finite")]
    NotFinite { name: &'static str },

    #[error("strong coupling: omega_bar^2 - pi^2 g^2 / 4 <= 0 (omega_bar = {omega_bar}, g = {g})")]
    StrongCoupling { omega_bar: f64, g: f64 },

    #[error("{what}")]
    Domain { what: String },

    #[error("no sign change on branch {branch} of the eigencondition")]
    BracketFailure { branch: usize },

    #[error("root on branch {branch} not converged (scaled residual {residual})")]
    RootNotConverged { branch: usize, residual: f64 },

    #[error("normal frequency {r} coincides with bath mode {k}")]
    DegenerateMode { r: usize, k: usize },

    #[error("potential matrix has a negative eigenvalue {eigenvalue}")]
    UnstableSystem { eigenvalue: f64 },

    #[error("mode index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("Lorentzian denominator is ill-conditioned at omega = {omega}")]
    DegeneratePole { omega: f64 },

    #[error("quadrature did not converge for {context}: value {value}, error estimate {error_estimate}")]
    QuadratureFailure {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("quadrature failed for {context}")]
    Quadrature {
        context: String,
        #[source]
        source: QuadError,
    },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
