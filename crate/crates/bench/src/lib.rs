//! Workloads shared by the criterion benches.

use nimtheta::problems::{self, NamedProblem};
use nimtheta::{Method, SolverConfig, StageTime};

/// Delay logistic over `[0, horizon]`.
pub fn logistic(horizon: f64) -> NamedProblem {
    problems::delay_logistic(horizon)
}

/// Rössler system in the chaotic regime.
pub fn rossler(horizon: f64) -> NamedProblem {
    problems::rossler_delay(7.9, horizon)
}

/// The step rules compared in the benches, labelled for report ids.
pub fn methods(h: f64, theta: f64) -> Vec<(&'static str, SolverConfig)> {
    let nim = SolverConfig::nim(h, theta);
    vec![
        ("nim-k3", nim),
        ("nim-k4", nim.with_terms(4)),
        ("explicit-euler", nim.with_method(Method::ExplicitEuler)),
        ("heun", nim.with_method(Method::Heun)),
        (
            "implicit-newton",
            nim.with_method(Method::ImplicitThetaNewton),
        ),
        ("nim-k3-lagged", nim.with_stage_time(StageTime::Lagged)),
    ]
}
