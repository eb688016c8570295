//! Built-in problems, addressable by stable names.

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Result, SolveError};
use crate::problem::DdeProblem;

pub const DELAY_LOGISTIC: &str = "delay-logistic";
pub const EXAMPLE_ODE: &str = "example-ode";
pub const ROSSLER_DELAY: &str = "rossler-delay";
pub const LINEAR_TEST: &str = "linear-test";

pub const NAMES: [&str; 4] = [DELAY_LOGISTIC, EXAMPLE_ODE, ROSSLER_DELAY, LINEAR_TEST];

/// Numeric overrides accepted by the registry. Fields that do not apply to a
/// problem are ignored by it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemParams {
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct NamedProblem {
    pub name: &'static str,
    pub problem: DdeProblem,
    /// Fully resolved parameters; rebuilding from these gives the same problem.
    pub params: ProblemParams,
    pub recommended: SolverConfig,
    pub notes: &'static str,
}

/// Looks up a problem by name, applying `params` over its defaults.
pub fn by_name(name: &str, params: &ProblemParams) -> Result<NamedProblem> {
    let named = match name {
        DELAY_LOGISTIC => delay_logistic(params.horizon.unwrap_or(100.0)),
        EXAMPLE_ODE => {
            let p = example_ode();
            match params.horizon {
                Some(t) => NamedProblem {
                    problem: p.problem.with_horizon(t),
                    params: ProblemParams {
                        horizon: Some(t),
                        ..p.params
                    },
                    ..p
                },
                None => p,
            }
        }
        ROSSLER_DELAY => {
            let c = params.c.unwrap_or(2.3);
            if !(c > 0.0) {
                return Err(SolveError::InvalidProblem(format!(
                    "rossler parameter c must be positive, got {c}"
                )));
            }
            rossler_delay(c, params.horizon.unwrap_or(300.0))
        }
        LINEAR_TEST => linear_test(
            params.lambda.unwrap_or(-1.0),
            params.tau.unwrap_or(1.0),
            params.mu.unwrap_or(0.5),
            params.horizon.unwrap_or(2.0),
        )?,
        other => {
            return Err(SolveError::InvalidProblem(format!(
                "unknown problem `{other}` (expected one of {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(named)
}

/// `y'(t) = 0.3 y(t) (1 - y(t - 1))`, `y(t <= 0) = 0.1`.
///
/// The Lipschitz constants are regional: with `y, nu` in `[0, 1.2]` both
/// `|0.3 (1 - nu)|` and `|0.3 y|` are at most 0.36.
pub fn delay_logistic(horizon: f64) -> NamedProblem {
    let problem = DdeProblem::new(
        1,
        1.0,
        horizon,
        |_, y, nu| vec![0.3 * y[0] * (1.0 - nu[0])],
        |_| vec![0.1],
    )
    .with_lipschitz(Some(0.36), Some(0.36));
    NamedProblem {
        name: DELAY_LOGISTIC,
        problem,
        params: ProblemParams {
            horizon: Some(horizon),
            ..Default::default()
        },
        recommended: SolverConfig::nim(0.01, 1.0),
        notes: "delay logistic growth, tau = 1, constant history 0.1; converges to 1",
    }
}

/// `y' = 2 - exp(-4t) - 2y`, `y(0) = 1`, with `y = 1 + (exp(-4t) - exp(-2t)) / 2`.
pub fn example_ode() -> NamedProblem {
    let problem = DdeProblem::new(
        1,
        0.0,
        10.0,
        |t, y, _| vec![2.0 - (-4.0 * t).exp() - 2.0 * y[0]],
        |_| vec![1.0],
    )
    .with_exact(|t| vec![1.0 + ((-4.0 * t).exp() - (-2.0 * t).exp()) / 2.0])
    .with_lipschitz(Some(2.0), None)
    // y'' = 8 exp(-4t) - 2 exp(-2t), largest at t = 0
    .with_second_deriv_bound(6.0);
    NamedProblem {
        name: EXAMPLE_ODE,
        problem,
        params: ProblemParams {
            horizon: Some(10.0),
            ..Default::default()
        },
        recommended: SolverConfig::nim(0.01, 1.0),
        notes: "delay-free test equation with closed-form solution",
    }
}

/// Rössler system with the delay in the second equation:
///
/// ```text
/// x' = -y - z
/// y' = x + a y(t - 1)
/// z' = b + z (x - c)
/// ```
///
/// `a = b = 0.2` and constant history `(1e-4, 1e-4, 1e-4)`.
pub fn rossler_delay(c: f64, horizon: f64) -> NamedProblem {
    const A: f64 = 0.2;
    const B: f64 = 0.2;
    let problem = DdeProblem::new(
        3,
        1.0,
        horizon,
        move |_, s, nu| vec![-s[1] - s[2], s[0] + A * nu[1], B + s[2] * (s[0] - c)],
        |_| vec![1e-4, 1e-4, 1e-4],
    );
    NamedProblem {
        name: ROSSLER_DELAY,
        problem,
        params: ProblemParams {
            horizon: Some(horizon),
            c: Some(c),
            ..Default::default()
        },
        recommended: SolverConfig::nim(0.01, 0.5),
        notes: "delayed Rössler system; c in {2.3, 2.9, 7.9} gives periodic to chaotic x-waveforms",
    }
}

/// `y' = lambda y + mu y(t - tau)`, `y = 1` on `[-tau, 0]`.
///
/// The exact solution is built segment by segment (method of steps) and is
/// attached when the horizon spans at most [`MAX_EXACT_SEGMENTS`] delay
/// intervals.
pub fn linear_test(lambda: f64, tau: f64, mu: f64, horizon: f64) -> Result<NamedProblem> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(SolveError::InvalidProblem(format!(
            "tau must be non-negative, got {tau}"
        )));
    }
    let mut problem = DdeProblem::new(
        1,
        tau,
        horizon,
        move |_, y, nu| vec![lambda * y[0] + mu * nu[0]],
        |_| vec![1.0],
    )
    .with_lipschitz(
        (lambda != 0.0).then(|| lambda.abs()),
        (mu != 0.0).then(|| mu.abs()),
    );
    if tau == 0.0 {
        problem = problem.with_exact(move |t| vec![((lambda + mu) * t).exp()]);
    } else if let Some(steps) = MethodOfSteps::new(lambda, mu, tau, horizon) {
        problem = problem.with_exact(move |t| vec![steps.eval(t)]);
    }
    Ok(NamedProblem {
        name: LINEAR_TEST,
        problem,
        params: ProblemParams {
            horizon: Some(horizon),
            lambda: Some(lambda),
            tau: Some(tau),
            mu: Some(mu),
            ..Default::default()
        },
        recommended: SolverConfig::nim(0.01, 0.5),
        notes: "linear constant-coefficient DDE with unit history and method-of-steps solution",
    })
}

pub const MAX_EXACT_SEGMENTS: usize = 32;

/// Closed-form solution of `y' = λ y + μ y(t - τ)`, `y ≡ 1` on `[-τ, 0]`.
///
/// On segment `k`, `t = kτ + s` with `s` in `[0, τ]`, the solution is
/// `p_k(s) e^{λ s} + q_k(s)` with polynomials `p_k`, `q_k`. Substituting the
/// previous segment as forcing gives `q_k` as the polynomial particular
/// solution of `q' - λ q = μ q_{k-1}` and
/// `p_k = y_k(0) - q_k(0) + μ ∫ p_{k-1}`.
#[derive(Debug, Clone)]
pub struct MethodOfSteps {
    lambda: f64,
    tau: f64,
    segments: Vec<(Poly, Poly)>,
}

impl MethodOfSteps {
    pub fn new(lambda: f64, mu: f64, tau: f64, horizon: f64) -> Option<Self> {
        if !(tau > 0.0) {
            return None;
        }
        let count = ((horizon / tau).ceil() as usize).max(1);
        if count > MAX_EXACT_SEGMENTS {
            return None;
        }
        let mut segments = Vec::with_capacity(count);
        let mut prev = (Poly::zero(), Poly::constant(1.0));
        let mut start = 1.0;
        for _ in 0..count {
            let (p_prev, q_prev) = &prev;
            let (p, q) = if lambda == 0.0 {
                // everything is polynomial
                let forcing = p_prev.add(q_prev);
                let mut q = forcing.integral().scale(mu);
                q.0[0] += start;
                (Poly::zero(), q)
            } else {
                let q = particular(lambda, &q_prev.scale(mu));
                let mut p = p_prev.integral().scale(mu);
                p.0[0] += start - q.eval(0.0);
                (p, q)
            };
            start = p.eval(tau) * (lambda * tau).exp() + q.eval(tau);
            prev = (p.clone(), q.clone());
            segments.push((p, q));
        }
        Some(MethodOfSteps {
            lambda,
            tau,
            segments,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        let k = ((t / self.tau).floor() as usize).min(self.segments.len() - 1);
        let s = t - k as f64 * self.tau;
        let (p, q) = &self.segments[k];
        p.eval(s) * (self.lambda * s).exp() + q.eval(s)
    }
}

/// Polynomial particular solution `r` of `r' - λ r = g`:
/// `r = -Σ_i g^{(i)} / λ^{i+1}`.
fn particular(lambda: f64, g: &Poly) -> Poly {
    let mut r = Poly::zero();
    let mut d = g.clone();
    let mut scale = -1.0 / lambda;
    while !d.is_zero() {
        r = r.add(&d.scale(scale));
        d = d.derivative();
        scale /= lambda;
    }
    r
}

/// Dense polynomial, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
struct Poly(Vec<f64>);

impl Poly {
    fn zero() -> Self {
        Poly(vec![0.0])
    }

    fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or(0.0) + other.0.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    fn integral(&self) -> Poly {
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(0.0);
        c.extend(self.0.iter().enumerate().map(|(i, a)| a / (i + 1) as f64));
        Poly(c)
    }

    fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * i as f64)
                .collect(),
        )
    }
}
