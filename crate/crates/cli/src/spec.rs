//! Run specification shared by command-line flags and TOML config files.
//!
//! Every flag has a config key of the same name; flags override the file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use nimtheta::problems::{self, NamedProblem, ProblemParams};
use nimtheta::{Method, SolverConfig, StageTime};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Trajectory,
    Error,
    PhaseXy,
    Table,
    Order,
    Stability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    NimTheta,
    ExplicitEuler,
    ImplicitThetaNewton,
    Heun,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::NimTheta => Method::NimTheta,
            MethodArg::ExplicitEuler => Method::ExplicitEuler,
            MethodArg::ImplicitThetaNewton => Method::ImplicitThetaNewton,
            MethodArg::Heun => Method::Heun,
        }
    }
}

impl From<Method> for MethodArg {
    fn from(m: Method) -> Self {
        match m {
            Method::NimTheta => MethodArg::NimTheta,
            Method::ExplicitEuler => MethodArg::ExplicitEuler,
            Method::ImplicitThetaNewton => MethodArg::ImplicitThetaNewton,
            Method::Heun => MethodArg::Heun,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageTimeArg {
    Advanced,
    Lagged,
}

impl From<StageTimeArg> for StageTime {
    fn from(s: StageTimeArg) -> Self {
        match s {
            StageTimeArg::Advanced => StageTime::Advanced,
            StageTimeArg::Lagged => StageTime::Lagged,
        }
    }
}

impl From<StageTime> for StageTimeArg {
    fn from(s: StageTime) -> Self {
        match s {
            StageTime::Advanced => StageTimeArg::Advanced,
            StageTime::Lagged => StageTimeArg::Lagged,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunSpec {
    /// Registered problem: delay-logistic, example-ode, rossler-delay, linear-test
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,

    /// Theta parameter in [0, 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,

    /// Step size
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,

    /// Horizon T of [0, T]
    #[arg(long = "T", id = "T")]
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,

    /// Number of NIM terms (>= 2)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,

    /// Time argument of the theta-weighted stages (t_{n+1} or t_n)
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage_time: Option<StageTimeArg>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_tol: Option<f64>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_max_iter: Option<usize>,

    /// Rössler control parameter
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,

    /// linear-test: coefficient of y(t)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,

    /// linear-test: delay
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,

    /// linear-test: coefficient of y(t - tau)
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<OutputKind>,

    /// Output file (standard output when absent)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),+ $(,)?) => {
        RunSpec { $($field: $top.$field.clone().or_else(|| $base.$field.clone()),)+ }
    };
}

impl RunSpec {
    pub fn from_toml_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation("CONFIG", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text)
            .map_err(|e| CliError::validation("CONFIG", format!("invalid config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run spec serializes")
    }

    /// `self` wins wherever it has a value.
    pub fn over(&self, base: &RunSpec) -> RunSpec {
        overlay!(
            self,
            base,
            problem,
            theta,
            h,
            horizon,
            k,
            method,
            stage_time,
            newton_tol,
            newton_max_iter,
            c,
            lambda,
            tau,
            mu,
            kind,
            out,
        )
    }

    /// Spec that rebuilds `named` with its recommended configuration.
    pub fn from_named(named: &NamedProblem) -> RunSpec {
        let cfg = &named.recommended;
        RunSpec {
            problem: Some(named.name.to_string()),
            theta: Some(cfg.theta),
            h: Some(cfg.h),
            horizon: named.params.horizon,
            k: Some(cfg.nim_terms),
            method: Some(cfg.method.into()),
            stage_time: Some(cfg.stage_time.into()),
            newton_tol: Some(cfg.newton_tol),
            newton_max_iter: Some(cfg.newton_max_iter),
            c: named.params.c,
            lambda: named.params.lambda,
            tau: named.params.tau,
            mu: named.params.mu,
            kind: None,
            out: None,
        }
    }

    pub fn params(&self) -> ProblemParams {
        ProblemParams {
            horizon: self.horizon,
            c: self.c,
            lambda: self.lambda,
            tau: self.tau,
            mu: self.mu,
        }
    }

    /// Problem from the registry and the solver configuration, starting from
    /// the problem's recommended settings.
    pub fn resolve(&self) -> Result<(NamedProblem, SolverConfig), CliError> {
        let name = self.problem.as_deref().ok_or_else(|| {
            CliError::validation("MISSING_PROBLEM", "--problem is required".to_string())
        })?;
        let named = problems::by_name(name, &self.params())?;
        let mut cfg = named.recommended;
        if let Some(theta) = self.theta {
            cfg.theta = theta;
        }
        if let Some(h) = self.h {
            cfg.h = h;
        }
        if let Some(k) = self.k {
            cfg.nim_terms = k;
        }
        if let Some(m) = self.method {
            cfg.method = m.into();
        }
        if let Some(s) = self.stage_time {
            cfg.stage_time = s.into();
        }
        if let Some(tol) = self.newton_tol {
            cfg.newton_tol = tol;
        }
        if let Some(it) = self.newton_max_iter {
            cfg.newton_max_iter = it;
        }
        cfg.validate(named.problem.horizon)?;
        Ok((named, cfg))
    }
}
