use std::fmt;

use thiserror::Error;

use crate::trajectory::Trajectory;

/// Identifies which stage evaluation of a step produced a non-finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// `f(t_n, y_n, nu_n)`.
    K1,
    /// Heun's corrector slope.
    K2,
    /// The `j`-th nested iterate of the NIM recursion (`S_j`, `j >= 2`).
    Iterate(usize),
    /// Newton residual or Jacobian column.
    Newton,
    /// The assembled update `y_{n+1}`.
    Update,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::K1 => write!(f, "k1"),
            Stage::K2 => write!(f, "k2"),
            Stage::Iterate(j) => write!(f, "S{j}"),
            Stage::Newton => write!(f, "newton"),
            Stage::Update => write!(f, "update"),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("delay {tau} is not an integer multiple of step {h}")]
    MisalignedDelay { tau: f64, h: f64 },

    #[error("delay {tau} is shorter than half a step {h}; the delayed state would be implicit")]
    DelayShorterThanStep { tau: f64, h: f64 },

    #[error("horizon {horizon} is not an integer multiple of step {h}")]
    MisalignedHorizon { horizon: f64, h: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("delayed index {index} outside stored trajectory of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("stage {stage} evaluated to a non-finite value")]
    NonFiniteStage { stage: Stage },

    #[error(
        "newton iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NewtonNoConvergence { iterations: usize, residual: f64 },

    #[error("newton jacobian is singular")]
    SingularJacobian,

    #[error("solution became non-finite at node {node} (t = {t})")]
    DivergedToNonFinite {
        node: usize,
        t: f64,
        /// Nodes `0..node` that were computed before the failure.
        partial: Box<Trajectory>,
    },

    #[error("error at h = {h} is zero; order is undefined")]
    NonPositiveError { h: f64 },

    #[error("problem has no {0}")]
    MissingData(&'static str),
}

impl SolveError {
    /// Stable code word for scripts and exit diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::MisalignedDelay { .. } => "MISALIGNED_DELAY",
            SolveError::DelayShorterThanStep { .. } => "DELAY_SHORTER_THAN_STEP",
            SolveError::MisalignedHorizon { .. } => "MISALIGNED_HORIZON",
            SolveError::InvalidConfig(_) => "INVALID_CONFIG",
            SolveError::InvalidProblem(_) => "INVALID_PROBLEM",
            SolveError::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            SolveError::NewtonNoConvergence { .. } | SolveError::SingularJacobian => "NEWTON_FAIL",
            SolveError::NonFiniteStage { .. } | SolveError::DivergedToNonFinite { .. } => {
                "NONFINITE"
            }
            SolveError::NonPositiveError { .. } => "NONPOSITIVE_ERROR",
            SolveError::MissingData(_) => "MISSING_DATA",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SolveError::NonFiniteStage { .. }
                | SolveError::NewtonNoConvergence { .. }
                | SolveError::SingularJacobian
                | SolveError::DivergedToNonFinite { .. }
                | SolveError::NonPositiveError { .. }
                | SolveError::IndexOutOfRange { .. }
        )
    }
}

pub type Result<T, E = SolveError> = std::result::Result<T, E>;
