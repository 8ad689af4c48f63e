use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SoccError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("message out of range for user {user}: {reason}")]
    MessageOutOfRange { user: usize, reason: String },

    #[error("user index {user} out of range (code has {users} users)")]
    UnknownUser { user: usize, users: usize },

    #[error("partition infeasible for n={n}, beta={beta}: {reason}")]
    InfeasiblePartition { n: usize, beta: f64, reason: String },

    #[error("value {value} outside the declared range [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },

    #[error("zero fading coefficient for user {user}")]
    ZeroFading { user: usize },

    #[error("optimizer did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("integral appears divergent: {0}")]
    Divergent(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("malformed alist input: {0}")]
    Alist(String),

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SoccError {
    fn from(e: std::io::Error) -> Self {
        SoccError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for SoccError {
    fn from(e: serde_json::Error) -> Self {
        SoccError::Config(e.to_string())
    }
}

pub type Result<T, E = SoccError> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> SoccError {
    SoccError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(SoccError::DimensionMismatch { expected, got })
    }
}
