//! Grid alignment of the constant delay and lookup of delayed states.
//!
//! With `tau = m h` the delayed value `y(t_n - tau)` is the stored node
//! `y_{n-m}` once `n >= m`, and the history `phi(t_n - tau)` before that.

use crate::error::{Result, SolveError};
use crate::problem::{DdeProblem, State};
use crate::trajectory::Trajectory;

/// Relative tolerance for `tau` (and `T`) being an integer multiple of `h`.
pub const ALIGNMENT_TOL: f64 = 1e-9;

/// `tau = (m + delta) h`. Only `delta == 0` is supported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayAlignment {
    pub m: usize,
    pub delta: f64,
}

pub fn align_delay(tau: f64, h: f64) -> Result<DelayAlignment> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SolveError::InvalidConfig(format!(
            "step h must be positive, got {h}"
        )));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(SolveError::InvalidProblem(format!(
            "delay must be non-negative, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(DelayAlignment { m: 0, delta: 0.0 });
    }
    if tau < 0.5 * h {
        return Err(SolveError::DelayShorterThanStep { tau, h });
    }
    let m = (tau / h).round();
    if (m * h - tau).abs() > ALIGNMENT_TOL * tau.max(1.0) {
        return Err(SolveError::MisalignedDelay { tau, h });
    }
    Ok(DelayAlignment {
        m: m as usize,
        delta: 0.0,
    })
}

/// Number of steps `N = round(T / h)`, rejecting a partial final step.
pub fn grid_steps(horizon: f64, h: f64) -> Result<usize> {
    let n = (horizon / h).round();
    if (n * h - horizon).abs() > ALIGNMENT_TOL * horizon.max(1.0) {
        return Err(SolveError::MisalignedHorizon { horizon, h });
    }
    Ok(n as usize)
}

/// `nu_n`, the approximation of `y(t_n - tau)`.
///
/// For a delay-free problem this is `states[n]` itself.
pub fn delayed_state(
    problem: &DdeProblem,
    traj: &Trajectory,
    align: &DelayAlignment,
    n: usize,
) -> Result<State> {
    if problem.is_delay_free() || n >= align.m {
        let index = n - if problem.is_delay_free() { 0 } else { align.m };
        return traj
            .states
            .get(index)
            .cloned()
            .ok_or(SolveError::IndexOutOfRange {
                index,
                len: traj.len(),
            });
    }
    let t = traj.time(n) - problem.delay;
    Ok((problem.history)(t))
}
