//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nimtheta::analysis::{
    empirical_order, error_vs_exact, error_vs_reference, reference_solution, stability_probe,
    Oracle,
};
use nimtheta::problems::{self, delay_logistic, linear_test, rossler_delay, ProblemParams};
use nimtheta::{
    align_delay, delayed_state, explicit_euler_step, heun_step, implicit_theta_step_newton,
    nim_theta_step, solve, DdeProblem, Method, SolveError, SolverConfig, StageTime, StepPoint,
    Trajectory,
};
use nimtheta_cli::{cmd_table1, output, StageTimeArg, Table1Args};

/// Published comparison table, cells as printed: t, S1, S2, S3, S, e1, e2, e3.
/// The t = 0.2 row is left out: it repeats the t = 0.02 row.
const PRINTED: [[&str; 8]; 11] = [
    ["0", "1", "1", "1", "1", "0", "0", "0"],
    [
        "0.01",
        "0.99016",
        "0.9902",
        "0.990196",
        "0.990295",
        "0.000099",
        "0.0000954",
        "0.0000994",
    ],
    [
        "0.02",
        "0.980969",
        "0.980976",
        "0.980969",
        "0.981163",
        "0.000194",
        "0.000187",
        "0.0001948",
    ],
    [
        "0.03",
        "0.972292",
        "0.97230",
        "0.972292",
        "0.972578",
        "0.000286",
        "0.000275",
        "0.0002863",
    ],
    [
        "0.04",
        "0.96414",
        "0.9641",
        "0.96414",
        "0.964514",
        "0.0003739",
        "0.00036",
        "0.0003741",
    ],
    [
        "0.05",
        "0.95648",
        "0.9565",
        "0.956488",
        "0.956947",
        "0.000458",
        "0.0004413",
        "0.0004584",
    ],
    [
        "0.06",
        "0.949315",
        "0.949334",
        "0.949315",
        "0.949854",
        "0.000538",
        "0.0005194",
        "0.0005391",
    ],
    [
        "0.1",
        "0.924966",
        "0.924993",
        "0.924966",
        "0.925795",
        "0.0008283",
        "0.00080",
        "0.0008289",
    ],
    [
        "0.3",
        "0.8745",
        "0.874563",
        "0.874528",
        "0.87619",
        "0.0016622",
        "0.001628",
        "0.001663",
    ],
    [
        "0.4", "0.87447", "0.874498", "0.87447", "0.87628", "0.001813", "0.001785", "0.001814",
    ],
    [
        "0.5",
        "0.881873",
        "0.881893",
        "0.881872",
        "0.883728",
        "0.001855",
        "0.001834",
        "0.0018554",
    ],
];
const COLUMNS: [&str; 8] = ["t", "S1", "S2", "S3", "S", "e1", "e2", "e3"];

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Verdict {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }

    fn with_details(mut self, details: Vec<String>) -> Self {
        self.details = details;
        self
    }
}

fn decimals(cell: &str) -> usize {
    cell.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// `v` cut (not rounded) to `d` decimals, as a string.
fn truncated(v: f64, d: usize) -> String {
    let wide = format!("{v:.12}");
    match wide.split_once('.') {
        Some((int, frac)) if d > 0 => format!("{int}.{}", &frac[..d]),
        Some((int, _)) => int.to_string(),
        None => wide,
    }
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nimtheta-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Rows of the table produced by the `table1` command at h = 0.01.
fn table_rows() -> (Vec<Vec<f64>>, Duration) {
    let csv = scratch().join("table1.csv");
    let args = Table1Args {
        h: 0.01,
        stage_time: StageTimeArg::Lagged,
        csv: Some(csv.clone()),
    };
    let start = Instant::now();
    cmd_table1(&args).expect("table1 runs");
    let elapsed = start.elapsed();
    let text = std::fs::read_to_string(csv).unwrap();
    let rows = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (rows, elapsed)
}

fn row_at(rows: &[Vec<f64>], t: f64) -> &Vec<f64> {
    rows.iter()
        .find(|r| (r[0] - t).abs() < 1e-9)
        .expect("table node")
}

fn criterion_1() -> Verdict {
    let (rows, elapsed) = table_rows();
    let mut mismatches = Vec::new();
    let mut cells = 0;
    for printed in PRINTED {
        let t: f64 = printed[0].parse().unwrap();
        let row = row_at(&rows, t);
        for col in 1..8 {
            cells += 1;
            let d = decimals(printed[col]);
            let rounded = format!("{:.d$}", row[col]);
            let expected = format!("{:.d$}", printed[col].parse::<f64>().unwrap());
            if rounded != expected {
                let cut = truncated(row[col], d);
                mismatches.push(format!(
                    "t={} {}: printed {} computed {} rounds to {} (truncates to {}{})",
                    printed[0],
                    COLUMNS[col],
                    printed[col],
                    row[col],
                    rounded,
                    cut,
                    if cut == expected {
                        ", matches"
                    } else {
                        ", no match"
                    }
                ));
            }
        }
    }
    let fast = elapsed < Duration::from_secs(1);
    let pass = mismatches.is_empty() && fast;
    let summary = format!(
        "{}/{cells} printed cells reproduced after rounding; runtime {:.3} s",
        cells - mismatches.len(),
        elapsed.as_secs_f64()
    );
    Verdict::new(pass, summary).with_details(mismatches)
}

fn criterion_2() -> Verdict {
    let (rows, _) = table_rows();
    let mut worst_gap = 0.0f64;
    let mut failures = Vec::new();
    for printed in PRINTED.iter().skip(1) {
        let t: f64 = printed[0].parse().unwrap();
        let r = row_at(&rows, t);
        let (e1, e2, e3) = (r[5], r[6], r[7]);
        worst_gap = worst_gap.max((e3 - e1).abs());
        if !(e2 < e1) {
            failures.push(format!("t={t}: e2 {e2} >= e1 {e1}"));
        }
        if !((e3 - e1).abs() < 1e-6) {
            failures.push(format!("t={t}: |e3 - e1| = {}", (e3 - e1).abs()));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{} violations; max |e3 - e1| = {worst_gap:.2e}",
            failures.len()
        ),
    )
    .with_details(failures)
}

fn order_band(theta: f64) -> (f64, f64) {
    if theta == 0.5 {
        (1.8, 2.2)
    } else {
        (0.8, 1.2)
    }
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let h_list = [0.1, 0.05, 0.025, 0.0125];
    let ode = problems::by_name(
        problems::EXAMPLE_ODE,
        &ProblemParams {
            horizon: Some(1.0),
            ..Default::default()
        },
    )
    .unwrap()
    .problem;
    let logistic = delay_logistic(5.0).problem;
    let reference = reference_solution(&logistic, 1e-4).expect("reference");
    let mut lines = Vec::new();
    let mut pass = true;
    for (label, problem, oracle) in [
        ("example ODE", &ode, Oracle::Exact),
        ("delay logistic", &logistic, Oracle::Reference(&reference)),
    ] {
        for theta in [0.0, 0.5, 0.75, 1.0] {
            let est = empirical_order(problem, &SolverConfig::nim(0.1, theta), &h_list, oracle)
                .expect("orders");
            let (lo, hi) = order_band(theta);
            let ok = est.orders.iter().all(|p| (lo..=hi).contains(p));
            pass &= ok;
            let shown: Vec<String> = est.orders.iter().map(|p| format!("{p:.3}")).collect();
            lines.push(format!(
                "{label} theta={theta}: orders [{}] band [{lo}, {hi}] {}",
                shown.join(", "),
                if ok { "ok" } else { "OUT" }
            ));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(10);
    Verdict::new(
        pass,
        format!(
            "orders checked against their bands; runtime {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
    .with_details(lines)
}

fn same_outcome(a: &nimtheta::Result<Trajectory>, b: &nimtheta::Result<Trajectory>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (
            Err(SolveError::DivergedToNonFinite {
                node: n1,
                partial: p1,
                ..
            }),
            Err(SolveError::DivergedToNonFinite {
                node: n2,
                partial: p2,
                ..
            }),
        ) => {
            n1 == n2
                && p1.states.len() == p2.states.len()
                && p1
                    .states
                    .iter()
                    .zip(&p2.states)
                    .all(|(u, v)| u.iter().zip(v).all(|(x, y)| x.to_bits() == y.to_bits()))
        }
        _ => false,
    }
}

fn criterion_4() -> Verdict {
    let mut failures = Vec::new();
    let mut runs = 0;
    for name in problems::NAMES {
        let problem = problems::by_name(name, &ProblemParams::default())
            .unwrap()
            .problem;
        for h in [0.1, 0.01] {
            let euler = solve(&problem, &SolverConfig::new(Method::ExplicitEuler, h, 0.0));
            for k in [2, 3, 5, 8] {
                for clock in [StageTime::Advanced, StageTime::Lagged] {
                    runs += 1;
                    let cfg = SolverConfig::nim(h, 0.0)
                        .with_terms(k)
                        .with_stage_time(clock);
                    if !same_outcome(&solve(&problem, &cfg), &euler) {
                        failures.push(format!("{name} h={h} k={k} {clock}"));
                    }
                }
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{}/{runs} theta = 0 runs bit-identical to explicit Euler",
            runs - failures.len()
        ),
    )
    .with_details(failures)
}

fn criterion_5() -> Verdict {
    let named = linear_test(-1.0, 1.0, 0.5, 2.0).unwrap();
    let p = &named.problem;
    let h = 0.01;
    let cfg = SolverConfig::new(Method::ImplicitThetaNewton, h, 1.0);
    let traj = solve(
        p,
        &SolverConfig {
            newton_tol: 1e-15,
            ..cfg
        },
    )
    .expect("newton trajectory");
    let align = align_delay(p.delay, h).unwrap();
    let mut failures = Vec::new();
    let mut worst_k8 = 0.0f64;
    for n in 0..100 {
        let tn = traj.time(n);
        let y = &traj.states[n];
        let nu = delayed_state(p, &traj, &align, n).unwrap();
        let nu1 = delayed_state(p, &traj, &align, n + 1).unwrap();
        let at = StepPoint::new(tn, h, y, &nu, &nu1);
        let star = implicit_theta_step_newton(p, &at, 1.0, StageTime::Advanced, 1e-15, 50).unwrap();
        let gap = |k: usize| {
            (nim_theta_step(p, &at, 1.0, k, StageTime::Advanced).unwrap()[0] - star[0]).abs()
        };
        let gaps: Vec<f64> = (2..=5).map(gap).collect();
        if !gaps.windows(2).all(|w| w[1] < w[0]) {
            failures.push(format!("step {n}: gaps {gaps:?}"));
        }
        let g8 = gap(8);
        worst_k8 = worst_k8.max(g8);
        if !(g8 < 1e-10) {
            failures.push(format!("step {n}: k=8 gap {g8:e}"));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!(
            "{} violations over 100 steps; max k=8 gap {worst_k8:.1e}",
            failures.len()
        ),
    )
    .with_details(failures)
}

fn criterion_6() -> Verdict {
    let problem = problems::by_name(
        problems::EXAMPLE_ODE,
        &ProblemParams {
            horizon: Some(1.0),
            ..Default::default()
        },
    )
    .unwrap()
    .problem;
    let eps = 1e-6;
    let limit = 2f64.exp() * eps;
    let mut lines = Vec::new();
    let mut pass = true;
    for h in [0.1, 0.01, 0.001] {
        let report = stability_probe(&problem, &SolverConfig::nim(h, 1.0), eps).expect("probe");
        let ok = report.observed_max_dev <= limit;
        pass &= ok;
        lines.push(format!(
            "h={h}: observed {:e} vs e^2 eps {limit:e}",
            report.observed_max_dev
        ));
    }
    Verdict::new(
        pass,
        "observed deviation vs e^2 * 1e-6 at h = 0.1, 0.01, 0.001",
    )
    .with_details(lines)
}

fn criterion_7() -> Verdict {
    let p = DdeProblem::new(1, 0.0, 1.0, |t, y, _| vec![t * y[0]], |_| vec![1.0]);
    let y0 = [1.0];
    let at = StepPoint::delay_free(0.0, 0.1, &y0);
    let nim = nim_theta_step(&p, &at, 0.5, 3, StageTime::Advanced).unwrap()[0];
    let heun = heun_step(&p, &at).unwrap()[0];
    let nim0 = nim_theta_step(&p, &at, 0.0, 3, StageTime::Advanced).unwrap()[0];
    let euler = explicit_euler_step(&p, &at).unwrap()[0];
    let diff = nim - heun;
    let pass = (nim - 1.0050250).abs() < 5e-8
        && (heun - 1.0050000).abs() < 5e-8
        && (diff - 2.5e-5).abs() <= 1e-9
        && nim0.to_bits() == euler.to_bits();
    Verdict::new(
        pass,
        format!(
            "NIM {nim:.7} vs Heun {heun:.7}, difference {diff:.3e}; theta = 0 step equals Euler"
        ),
    )
}

fn criterion_8() -> Verdict {
    let problem = delay_logistic(100.0).problem;
    let traj = solve(&problem, &SolverConfig::nim(0.01, 1.0)).expect("logistic");
    let ys = traj.component(0);
    let monotone = ys.windows(2).all(|w| w[1] >= w[0]);
    let bounded = ys.iter().all(|&y| y > 0.0 && y < 1.3);
    let end = *ys.last().unwrap();
    let reference = reference_solution(&problem, 1e-4).expect("reference");
    let err = error_vs_reference(&traj, &reference)
        .expect("common grid")
        .max_error;
    let pass = monotone && bounded && (end - 1.0).abs() < 0.05 && err < 5e-3;
    Verdict::new(
        pass,
        format!("monotone {monotone}, bounded in (0, 1.3) {bounded}, y(100) = {end:.6}, max error vs reference {err:.2e}"),
    )
}

fn criterion_9() -> Verdict {
    let start = Instant::now();
    let dir = scratch();
    let mut lines = Vec::new();
    let mut pass = true;
    for c in [2.3, 2.9, 7.9] {
        let long = solve(
            &rossler_delay(c, 300.0).problem,
            &SolverConfig::nim(0.01, 0.5),
        );
        let finite = match &long {
            Ok(traj) => traj.states.iter().flatten().all(|v| v.is_finite()),
            Err(_) => false,
        };
        let emitted = match &long {
            Ok(traj) => {
                let path = dir.join(format!("rossler-c{c}.csv"));
                std::fs::write(&path, output::phase_csv(traj)).is_ok()
                    && std::fs::read_to_string(&path)
                        .map(|s| s.lines().count() == traj.len() + 1)
                        .unwrap_or(false)
            }
            Err(_) => false,
        };
        let short = rossler_delay(c, 50.0).problem;
        let coarse = solve(&short, &SolverConfig::nim(0.01, 0.5)).expect("h = 0.01");
        let fine = solve(&short, &SolverConfig::nim(0.005, 0.5)).expect("h = 0.005");
        let gap = error_vs_reference(&coarse, &fine)
            .expect("nested grids")
            .max_error;
        let ok = finite && emitted && gap < 0.5;
        pass &= ok;
        lines.push(format!(
            "c={c}: finite {finite}, phase CSV {emitted}, half-step gap on [0, 50] {gap:.2e}"
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    Verdict::new(
        pass,
        format!(
            "c = 2.3, 2.9, 7.9 at T = 300; runtime {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
    .with_details(lines)
}

fn criterion_10() -> Verdict {
    let problem = linear_test(0.0, 1.0, 1.0, 1.0).unwrap().problem;
    let traj = solve(&problem, &SolverConfig::nim(0.01, 0.5)).expect("linear");
    let err = error_vs_exact(&traj, &|t| vec![1.0 + t]).max_error;
    Verdict::new(
        err < 1e-5,
        format!("max error vs 1 + t on [0, 1] = {err:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        (
            "comparison table reproduced to printed precision",
            criterion_1,
        ),
        ("e2 < e1 and e3 matches e1", criterion_2),
        ("empirical convergence orders", criterion_3),
        ("theta = 0 is explicit Euler", criterion_4),
        ("NIM terms converge to the implicit step", criterion_5),
        ("initial-value perturbation bound", criterion_6),
        ("NIM at theta = 1/2 differs from Heun", criterion_7),
        ("delay logistic settles at 1", criterion_8),
        ("Rossler runs finite", criterion_9),
        ("method-of-steps closed form", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {}: {title}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.summary
        );
        for d in &v.details {
            println!("       {d}");
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
