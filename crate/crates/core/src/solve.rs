//! Outer time-stepping loop shared by all methods.

use crate::config::{Method, SolverConfig};
use crate::delay::{align_delay, delayed_state, grid_steps, DelayAlignment};
use crate::error::{Result, SolveError};
use crate::problem::{DdeProblem, State};
use crate::steppers::{
    explicit_euler_step, heun_step, implicit_theta_step_newton, nim_theta_step, StepPoint,
};
use crate::trajectory::Trajectory;

/// Advances one step with the method selected by `config`.
pub fn step(problem: &DdeProblem, config: &SolverConfig, at: &StepPoint<'_>) -> Result<State> {
    match config.method {
        Method::NimTheta => nim_theta_step(
            problem,
            at,
            config.theta,
            config.nim_terms,
            config.stage_time,
        ),
        Method::ExplicitEuler => explicit_euler_step(problem, at),
        Method::ImplicitThetaNewton => implicit_theta_step_newton(
            problem,
            at,
            config.theta,
            config.stage_time,
            config.newton_tol,
            config.newton_max_iter,
        ),
        Method::Heun => heun_step(problem, at),
    }
}

/// Integrates `problem` on `[0, T]` with uniform step `config.h`.
///
/// `states[0]` is `history(0)`; every further node is one stepper call with
/// `nu_n` and `nu_{n+1}` looked up from the trajectory prefix or the history.
/// A non-finite state stops the solve; the nodes computed so far are returned
/// inside the error.
pub fn solve(problem: &DdeProblem, config: &SolverConfig) -> Result<Trajectory> {
    problem.validate()?;
    config.validate(problem.horizon)?;
    let align = align_delay(problem.delay, config.h)?;
    let steps = grid_steps(problem.horizon, config.h)?;
    integrate(problem, config, &align, steps)
}

fn integrate(
    problem: &DdeProblem,
    config: &SolverConfig,
    align: &DelayAlignment,
    steps: usize,
) -> Result<Trajectory> {
    let h = config.h;
    let mut traj = Trajectory::with_capacity(h, problem.initial_state(), steps + 1);
    let delay_free = problem.is_delay_free();

    for n in 0..steps {
        let tn = traj.time(n);
        let result = if delay_free {
            let at = StepPoint::delay_free(tn, h, &traj.states[n]);
            step(problem, config, &at)
        } else {
            // m >= 1, so nu_{n+1} refers at most to node n
            let nu = delayed_state(problem, &traj, align, n)?;
            let nu_next = delayed_state(problem, &traj, align, n + 1)?;
            let at = StepPoint::new(tn, h, &traj.states[n], &nu, &nu_next);
            step(problem, config, &at)
        };
        let next = match result {
            Ok(y) if y.iter().all(|v| v.is_finite()) => y,
            Ok(_) | Err(SolveError::NonFiniteStage { .. }) => {
                return Err(SolveError::DivergedToNonFinite {
                    node: n + 1,
                    t: traj.time(n + 1),
                    partial: Box::new(traj),
                })
            }
            Err(e) => return Err(e),
        };
        traj.states.push(next);
    }
    Ok(traj)
}
