use thiserror::Error;

use crate::game::StageState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error(
        "quadrature did not converge (last estimate {last_estimate}, error bound {error_bound})"
    )]
    NumericFailure {
        last_estimate: f64,
        error_bound: f64,
    },

    #[error("state {state} is infeasible: {reason}")]
    InfeasibleState { state: StageState, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no strategy entry for state {0}")]
    MissingEntry(StageState),

    #[error("response curve is singular at beta = {beta}")]
    Singular { beta: f64 },

    #[error("stage solver failed at {state:?}: {reason}")]
    SolverFailure {
        state: Option<StageState>,
        reason: String,
    },

    #[error("spec error{}: {message}", location.as_ref().map(|l| format!(" at {l}")).unwrap_or_default())]
    Spec {
        location: Option<String>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Attaches a state to a solver failure that was raised without one.
    pub(crate) fn at_state(self, state: StageState) -> Self {
        match self {
            Error::SolverFailure {
                state: None,
                reason,
            } => Error::SolverFailure {
                state: Some(state),
                reason,
            },
            Error::Singular { beta } => Error::SolverFailure {
                state: Some(state),
                reason: format!("singular response curve at beta = {beta}"),
            },
            other => other,
        }
    }
}
