//! Fixed-step solvers for delay differential equations with one constant
//! delay,
//!
//! ```text
//! y'(t) = f(t, y(t), y(t - tau)),  t in [0, T],
//! y(t)  = phi(t),                  t in [-tau, 0],
//! ```
//!
//! built around an explicit family of theta-methods. Each step takes the
//! implicit theta-method `y = u0 + hθ f(t_{n+1}, y, ν_{n+1})` and replaces the
//! nonlinear solve by a truncated NIM (new iterative method) series, which is
//! the nested application `S_j = u0 + hθ f(t_{n+1}, S_{j-1}, ν_{n+1})`.
//! Explicit Euler, Heun and the Newton-solved implicit theta-method are
//! provided as baselines, together with an analysis toolkit (errors,
//! empirical orders, perturbation probes) and the built-in test problems.
//!
//! ```
//! use nimtheta::{problems, solve, SolverConfig};
//!
//! let logistic = problems::delay_logistic(20.0);
//! let traj = solve(&logistic.problem, &SolverConfig::nim(0.01, 1.0)).unwrap();
//! assert_eq!(traj.len(), 2001);
//! ```

pub mod analysis;
pub mod config;
pub mod delay;
pub mod error;
pub mod problem;
pub mod problems;
pub mod solve;
pub mod steppers;
pub mod trajectory;

pub use config::{Method, SolverConfig, StageTime};
pub use delay::{align_delay, delayed_state, DelayAlignment};
pub use error::{Result, SolveError, Stage};
pub use problem::{DdeProblem, State};
pub use solve::solve;
pub use steppers::{
    explicit_euler_step, heun_step, implicit_theta_step_newton, nim_theta_stages, nim_theta_step,
    StageValues, StepPoint,
};
pub use trajectory::Trajectory;
