//! Problem definition for `y'(t) = f(t, y(t), y(t - tau))` on `[0, T]` with
//! history `y(t) = phi(t)` on `[-tau, 0]`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SolveError};

/// A state vector.
pub type State = Vec<f64>;

/// Right-hand side `f(t, y, nu)` where `nu` approximates `y(t - tau)`.
pub type Rhs = Arc<dyn Fn(f64, &[f64], &[f64]) -> State + Send + Sync>;

/// A function of time alone: history or closed-form solution.
pub type TimeFn = Arc<dyn Fn(f64) -> State + Send + Sync>;

/// Initial value problem for a DDE with one constant delay.
///
/// For `delay == 0` the problem is an ODE and the solver passes a copy of the
/// stage argument `y` as `nu`.
#[derive(Clone)]
pub struct DdeProblem {
    pub dim: usize,
    pub rhs: Rhs,
    pub delay: f64,
    pub history: TimeFn,
    pub horizon: f64,
    /// Lipschitz constant of `f` in its state argument.
    pub lipschitz_l1: Option<f64>,
    /// Lipschitz constant of `f` in its delayed argument.
    pub lipschitz_l2: Option<f64>,
    /// Bound on `|y''|`, used by the first-order error bound.
    pub second_deriv_bound: Option<f64>,
    pub exact: Option<TimeFn>,
}

impl DdeProblem {
    pub fn new<F, H>(dim: usize, delay: f64, horizon: f64, rhs: F, history: H) -> Self
    where
        F: Fn(f64, &[f64], &[f64]) -> State + Send + Sync + 'static,
        H: Fn(f64) -> State + Send + Sync + 'static,
    {
        DdeProblem {
            dim,
            rhs: Arc::new(rhs),
            delay,
            history: Arc::new(history),
            horizon,
            lipschitz_l1: None,
            lipschitz_l2: None,
            second_deriv_bound: None,
            exact: None,
        }
    }

    pub fn with_exact<E>(mut self, exact: E) -> Self
    where
        E: Fn(f64) -> State + Send + Sync + 'static,
    {
        self.exact = Some(Arc::new(exact));
        self
    }

    pub fn with_lipschitz(mut self, l1: Option<f64>, l2: Option<f64>) -> Self {
        self.lipschitz_l1 = l1;
        self.lipschitz_l2 = l2;
        self
    }

    pub fn with_second_deriv_bound(mut self, m2: f64) -> Self {
        self.second_deriv_bound = Some(m2);
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self
    }

    /// Same problem with a different history; everything else is shared.
    pub fn with_history<H>(mut self, history: H) -> Self
    where
        H: Fn(f64) -> State + Send + Sync + 'static,
    {
        self.history = Arc::new(history);
        self
    }

    pub fn eval(&self, t: f64, y: &[f64], nu: &[f64]) -> State {
        (self.rhs)(t, y, nu)
    }

    pub fn initial_state(&self) -> State {
        (self.history)(0.0)
    }

    pub fn is_delay_free(&self) -> bool {
        self.delay == 0.0
    }

    /// A horizon of zero is accepted and yields the single initial node.
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(SolveError::InvalidProblem(
                "dimension must be at least 1".into(),
            ));
        }
        if !(self.delay.is_finite() && self.delay >= 0.0) {
            return Err(SolveError::InvalidProblem(format!(
                "delay must be finite and non-negative, got {}",
                self.delay
            )));
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return Err(SolveError::InvalidProblem(format!(
                "horizon must be finite and non-negative, got {}",
                self.horizon
            )));
        }
        let y0 = self.initial_state();
        if y0.len() != self.dim {
            return Err(SolveError::InvalidProblem(format!(
                "history returns {} components, expected {}",
                y0.len(),
                self.dim
            )));
        }
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(SolveError::InvalidProblem(
                "history(0) is not finite".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for DdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdeProblem")
            .field("dim", &self.dim)
            .field("delay", &self.delay)
            .field("horizon", &self.horizon)
            .field("lipschitz_l1", &self.lipschitz_l1)
            .field("lipschitz_l2", &self.lipschitz_l2)
            .field("second_deriv_bound", &self.second_deriv_bound)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}
