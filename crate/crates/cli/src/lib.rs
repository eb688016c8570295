//! Command-line front end for the `nimtheta` solvers.
//!
//! Exit codes: 0 success, 1 a `--assert` expectation failed, 2 invalid input,
//! 3 numerical failure. Every failure prints one line
//! `error[CODE]: message` on standard error.

pub mod output;
pub mod spec;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use nimtheta::analysis::{
    self, empirical_order, error_vs_exact, reference_solution, stability_probe, Oracle,
};
use nimtheta::{solve, SolveError, StageTime};

pub use spec::{MethodArg, OutputKind, RunSpec, StageTimeArg};

pub const EXIT_ASSERT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn validation(code: &'static str, message: String) -> Self {
        CliError {
            code,
            message,
            exit: EXIT_VALIDATION,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            code: "IO",
            message: format!("{}: {e}", path.display()),
            exit: EXIT_VALIDATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let exit = if e.is_numerical() {
            EXIT_NUMERICAL
        } else {
            EXIT_VALIDATION
        };
        CliError {
            code: e.code(),
            message: e.to_string(),
            exit,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nimtheta",
    version,
    about = "Theta-method solvers for constant-delay DDEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a registered problem and write a CSV
    Solve(SolveArgs),
    /// Backward Euler vs. NIM comparison table on the example ODE
    Table1(Table1Args),
    /// Empirical convergence order from successive step halvings
    Order(OrderArgs),
    /// Initial-value perturbation probe against the exp(T L1) bound
    Stability(StabilityArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    /// TOML file with the same keys as the flags; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Solve once per theta in this comma-separated list, concurrently
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub sweep_theta: Option<Vec<f64>>,
    /// Directory for sweep outputs
    #[arg(long, requires = "sweep_theta")]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 0.01)]
    pub h: f64,
    /// Stage time of the implicit-side stages; the published table uses t_n
    #[arg(long, value_enum, default_value_t = StageTimeArg::Lagged)]
    pub stage_time: StageTimeArg,
    /// Also write the table as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleArg {
    Exact,
    Reference,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Successively halved step sizes, coarsest first
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub h_list: Vec<f64>,
    /// Compare against the closed form, or an implicit trapezoidal reference
    #[arg(long, value_enum)]
    pub oracle: Option<OracleArg>,
    #[arg(long, default_value_t = 1e-4)]
    pub reference_h: f64,
    /// Exit 1 unless every order lies within 0.2 of the expected order
    /// (2 for theta = 1/2 with NIM, trapezoidal or Heun steps, 1 otherwise)
    #[arg(long)]
    pub assert: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub spec: RunSpec,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Exit 1 if the observed deviation exceeds the bound
    #[arg(long)]
    pub assert: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// What a command produced: text for standard output and an exit status.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Table1(args) => cmd_table1(&args),
        Command::Order(args) => cmd_order(&args),
        Command::Stability(args) => cmd_stability(&args),
    }
}

fn merged(spec: &RunSpec, config: Option<&Path>) -> Result<RunSpec, CliError> {
    match config {
        Some(path) => Ok(spec.over(&RunSpec::from_toml_file(path)?)),
        None => Ok(spec.clone()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Writes to `--out` when given, otherwise returns the text for stdout.
fn emit(out: Option<&Path>, text: String) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(Outcome::default())
        }
        None => Ok(Outcome {
            stdout: text,
            exit: 0,
        }),
    }
}

fn render_solution(spec: &RunSpec) -> Result<String, CliError> {
    let (named, cfg) = spec.resolve()?;
    let traj = solve(&named.problem, &cfg)?;
    match spec.kind.unwrap_or(OutputKind::Trajectory) {
        OutputKind::Trajectory => Ok(output::trajectory_csv(&traj)),
        OutputKind::Error => {
            let exact = named.problem.exact.as_ref().ok_or_else(|| {
                CliError::validation(
                    "MISSING_DATA",
                    format!("{} has no closed-form solution", named.name),
                )
            })?;
            Ok(output::error_csv(&error_vs_exact(&traj, &**exact)))
        }
        OutputKind::PhaseXy => {
            if named.problem.dim < 2 {
                return Err(CliError::validation(
                    "INVALID_KIND",
                    format!(
                        "phase-xy needs at least two components, {} has {}",
                        named.name, named.problem.dim
                    ),
                ));
            }
            Ok(output::phase_csv(&traj))
        }
        other => Err(CliError::validation(
            "INVALID_KIND",
            format!(
                "solve writes trajectory, error or phase-xy; use the `{}` command",
                kind_command(other)
            ),
        )),
    }
}

fn kind_command(kind: OutputKind) -> &'static str {
    match kind {
        OutputKind::Table => "table1",
        OutputKind::Order => "order",
        OutputKind::Stability => "stability",
        _ => "solve",
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let spec = merged(&args.spec, args.config.as_deref())?;
    let Some(thetas) = &args.sweep_theta else {
        let text = render_solution(&spec)?;
        return emit(spec.out.as_deref(), text);
    };

    let dir = args.out_dir.clone().ok_or_else(|| {
        CliError::validation(
            "MISSING_OUT_DIR",
            "--sweep-theta requires --out-dir".to_string(),
        )
    })?;
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let name = spec.problem.clone().unwrap_or_default();
    let jobs: Vec<(PathBuf, RunSpec)> = thetas
        .iter()
        .map(|&theta| {
            let path = dir.join(format!("{name}-theta{theta}.csv"));
            (
                path,
                RunSpec {
                    theta: Some(theta),
                    out: None,
                    ..spec.clone()
                },
            )
        })
        .collect();
    let results: Vec<Result<(), CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(path, job)| scope.spawn(move || write_file(path, &render_solution(job)?)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut listing = String::new();
    for ((path, _), result) in jobs.iter().zip(results) {
        result?;
        listing.push_str(&format!("{}\n", path.display()));
    }
    Ok(Outcome {
        stdout: listing,
        exit: 0,
    })
}

pub fn cmd_table1(args: &Table1Args) -> Result<Outcome, CliError> {
    let table = analysis::table1_with(args.h, StageTime::from(args.stage_time))?;
    if let Some(path) = &args.csv {
        write_file(path, &output::table1_csv(&table))?;
    }
    Ok(Outcome {
        stdout: output::table1_text(&table),
        exit: 0,
    })
}

pub fn cmd_order(args: &OrderArgs) -> Result<Outcome, CliError> {
    let spec = merged(&args.spec, args.config.as_deref())?;
    let first_h = args.h_list.first().copied();
    let spec = RunSpec {
        h: spec.h.or(first_h),
        ..spec
    };
    let (named, cfg) = spec.resolve()?;
    let oracle_kind = args.oracle.unwrap_or(if named.problem.exact.is_some() {
        OracleArg::Exact
    } else {
        OracleArg::Reference
    });
    let reference;
    let oracle = match oracle_kind {
        OracleArg::Exact => Oracle::Exact,
        OracleArg::Reference => {
            reference = reference_solution(&named.problem, args.reference_h)?;
            Oracle::Reference(&reference)
        }
    };
    let est = empirical_order(&named.problem, &cfg, &args.h_list, oracle)?;
    if let Some(path) = &args.csv {
        write_file(path, &output::order_csv(&est))?;
    }
    let mut stdout = output::order_text(&est);
    let mut exit = 0;
    if args.assert {
        let expected = expected_order(&cfg);
        let ok = est.orders.iter().all(|p| (p - expected).abs() <= 0.2);
        stdout.push_str(&format!(
            "expected order {expected} +/- 0.2: {}\n",
            if ok { "PASS" } else { "FAIL" }
        ));
        if !ok {
            exit = EXIT_ASSERT;
        }
    }
    Ok(Outcome { stdout, exit })
}

/// Order the theory predicts for the configured method.
pub fn expected_order(cfg: &nimtheta::SolverConfig) -> f64 {
    use nimtheta::Method;
    let second = match cfg.method {
        Method::Heun => true,
        Method::ExplicitEuler => false,
        Method::NimTheta | Method::ImplicitThetaNewton => {
            cfg.theta == 0.5 && cfg.stage_time == StageTime::Advanced
        }
    };
    if second {
        2.0
    } else {
        1.0
    }
}

pub fn cmd_stability(args: &StabilityArgs) -> Result<Outcome, CliError> {
    let spec = merged(&args.spec, args.config.as_deref())?;
    let (named, cfg) = spec.resolve()?;
    let report = stability_probe(&named.problem, &cfg, args.epsilon)?;
    if let Some(path) = &args.csv {
        write_file(path, &output::stability_csv(&report))?;
    }
    let mut stdout = output::stability_text(&report);
    let mut exit = 0;
    if args.assert && !report.within_bound() {
        stdout.push_str("FAIL: observed deviation exceeds bound\n");
        exit = EXIT_ASSERT;
    }
    Ok(Outcome { stdout, exit })
}
