use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolveError};

/// Step rule used by [`solve`](crate::solve).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Explicit theta-method obtained from the k-term NIM solution of the
    /// implicit theta-method.
    NimTheta,
    ExplicitEuler,
    /// Classical implicit theta-method, solved by Newton iteration.
    ImplicitThetaNewton,
    /// Two-stage Runge-Kutta baseline (c = (0, 1), b = (1/2, 1/2)).
    Heun,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::NimTheta,
        Method::ExplicitEuler,
        Method::ImplicitThetaNewton,
        Method::Heun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::NimTheta => "nim-theta",
            Method::ExplicitEuler => "explicit-euler",
            Method::ImplicitThetaNewton => "implicit-theta-newton",
            Method::Heun => "heun",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

/// Time argument of the theta-weighted (right endpoint) stages.
///
/// `Advanced` evaluates them at `t_{n+1}`, which is the consistent
/// discretisation of the integral over `[t_n, t_{n+1}]`. `Lagged` evaluates
/// them at `t_n`; this is only first order for non-autonomous problems but is
/// what the published backward-Euler / NIM comparison table was computed
/// with. Irrelevant for autonomous right-hand sides.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageTime {
    #[default]
    Advanced,
    Lagged,
}

impl StageTime {
    pub fn name(self) -> &'static str {
        match self {
            StageTime::Advanced => "advanced",
            StageTime::Lagged => "lagged",
        }
    }

    /// Time at which the implicit-side stages of step `[tn, tn + h]` are taken.
    #[inline]
    pub fn implicit_time(self, tn: f64, h: f64) -> f64 {
        match self {
            StageTime::Advanced => tn + h,
            StageTime::Lagged => tn,
        }
    }
}

impl fmt::Display for StageTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StageTime {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "advanced" => Ok(StageTime::Advanced),
            "lagged" => Ok(StageTime::Lagged),
            _ => Err(format!(
                "unknown stage time `{s}` (expected advanced|lagged)"
            )),
        }
    }
}

pub const DEFAULT_NIM_TERMS: usize = 3;
pub const DEFAULT_NEWTON_TOL: f64 = 1e-12;
pub const DEFAULT_NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub h: f64,
    pub theta: f64,
    /// Number of NIM terms `k`; the step applies the nonlinear map `k - 1` times.
    pub nim_terms: usize,
    pub method: Method,
    pub stage_time: StageTime,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
}

impl SolverConfig {
    pub fn new(method: Method, h: f64, theta: f64) -> Self {
        SolverConfig {
            h,
            theta,
            nim_terms: DEFAULT_NIM_TERMS,
            method,
            stage_time: StageTime::Advanced,
            newton_tol: DEFAULT_NEWTON_TOL,
            newton_max_iter: DEFAULT_NEWTON_MAX_ITER,
        }
    }

    pub fn nim(h: f64, theta: f64) -> Self {
        Self::new(Method::NimTheta, h, theta)
    }

    pub fn with_terms(mut self, k: usize) -> Self {
        self.nim_terms = k;
        self
    }

    pub fn with_stage_time(mut self, stage_time: StageTime) -> Self {
        self.stage_time = stage_time;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_h(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    /// Checks parameter ranges; `h <= horizon` is enforced only for a
    /// positive horizon.
    pub fn validate(&self, horizon: f64) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(SolveError::InvalidConfig(format!(
                "step h must be positive, got {}",
                self.h
            )));
        }
        if horizon > 0.0 && self.h > horizon * (1.0 + 1e-12) {
            return Err(SolveError::InvalidConfig(format!(
                "step h = {} exceeds horizon {horizon}",
                self.h
            )));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(SolveError::InvalidConfig(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        if self.nim_terms < 2 {
            return Err(SolveError::InvalidConfig(format!(
                "nim_terms must be at least 2, got {}",
                self.nim_terms
            )));
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(SolveError::InvalidConfig(
                "newton_tol must be positive".into(),
            ));
        }
        if self.newton_max_iter == 0 {
            return Err(SolveError::InvalidConfig(
                "newton_max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}
