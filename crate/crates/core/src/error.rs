use thiserror::Error;

/// Errors produced by the numerical routines of the crate.
///
/// Errors fall into two families: validation errors (bad input, checked
/// before any computation starts) and numerical failures (the computation
/// started but did not reach its target). [`Error::is_validation`] tells them
/// apart, which the command-line front end maps onto distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: ({n1}, {l1}) vs ({n2}, {l2})")]
    GridMismatch { n1: usize, l1: f64, n2: usize, l2: f64 },

    #[error("multiplier `{tag}` is not finite at xi = {xi}")]
    NonFiniteSymbol { tag: String, xi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} did not converge (last residual {last:.3e})")]
    NonConvergence { what: String, last: f64, history: Vec<f64> },

    #[error("step size underflow at t = {t} (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("non-finite state encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by invalid input rather than by a numerical
    /// procedure failing.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::GridMismatch { .. }
                | Error::NonFiniteSymbol { .. }
                | Error::InvalidArgument(_)
                | Error::Parse(_)
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
