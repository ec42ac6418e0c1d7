use thiserror::Error;

/// Errors raised by the phase-space and device models.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode index {0} listed more than once")]
    DuplicateMode(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("covariance matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("covariance matrix violates the uncertainty principle (min eigenvalue {0:e})")]
    NotPhysical(f64),

    #[error("matrix is singular: {0}")]
    Singular(&'static str),

    #[error("device is dynamically unstable (max drift eigenvalue real part {0:e})")]
    Unstable(f64),

    #[error("direct conversion needs zeta_o*zeta_e > 1/2; got {0}")]
    BoundaryUnreachable(f64),

    #[error("state saturates the EPR limit (beta_minus = 0)")]
    EprSingular,

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
