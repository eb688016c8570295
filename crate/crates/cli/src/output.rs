//! CSV and text rendering. Numbers use the shortest decimal that round-trips.

use std::fmt::Write;

use nimtheta::analysis::{ErrorReport, OrderEstimate, StabilityReport, Table1};
use nimtheta::Trajectory;

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    for i in 0..traj.dim() {
        write!(out, ",y{i}").unwrap();
    }
    out.push('\n');
    for (t, y) in traj.iter() {
        write!(out, "{t}").unwrap();
        for v in y {
            write!(out, ",{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn error_csv(report: &ErrorReport) -> String {
    let mut out = String::from("t,abs_error\n");
    for (t, e) in &report.per_node {
        writeln!(out, "{t},{e}").unwrap();
    }
    out
}

/// First two state components as `x,y` pairs.
pub fn phase_csv(traj: &Trajectory) -> String {
    let mut out = String::from("x,y\n");
    for y in &traj.states {
        writeln!(out, "{},{}", y[0], y[1]).unwrap();
    }
    out
}

pub fn table1_csv(table: &Table1) -> String {
    let mut out = String::from("t,S1,S2,S3,S,e1,e2,e3\n");
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.t, r.s1, r.s2, r.s3, r.exact, r.e1, r.e2, r.e3
        )
        .unwrap();
    }
    out
}

pub fn table1_text(table: &Table1) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "Backward Euler (S1) vs NIM theta=1 with 3 terms (S2) and 4 terms (S3); h = {}, stage time {}",
        table.h, table.stage_time
    )
    .unwrap();
    writeln!(
        out,
        "{:>6}  {:>10} {:>10} {:>10} {:>10}  {:>11} {:>11} {:>11}",
        "t", "S1", "S2", "S3", "S", "e1", "e2", "e3"
    )
    .unwrap();
    let mut flagged = false;
    for r in &table.rows {
        let mark = if r.is_suspect() {
            flagged = true;
            "*"
        } else {
            " "
        };
        writeln!(
            out,
            "{:>5}{mark}  {:>10.7} {:>10.7} {:>10.7} {:>10.7}  {:>11.8} {:>11.8} {:>11.8}",
            format!("{:.2}", r.t),
            r.s1,
            r.s2,
            r.s3,
            r.exact,
            r.e1,
            r.e2,
            r.e3
        )
        .unwrap();
    }
    if flagged {
        writeln!(
            out,
            "* the published t = 0.2 row repeats the t = 0.02 values (S = 0.981163); computed values are shown"
        )
        .unwrap();
    }
    out
}

pub fn order_csv(est: &OrderEstimate) -> String {
    let mut out = String::from("h,max_error,order\n");
    for (i, (h, e)) in est.h_pairs.iter().enumerate() {
        match i.checked_sub(1).map(|j| est.orders[j]) {
            Some(p) => writeln!(out, "{h},{e},{p}").unwrap(),
            None => writeln!(out, "{h},{e},").unwrap(),
        }
    }
    out
}

pub fn order_text(est: &OrderEstimate) -> String {
    let mut out = String::new();
    for (i, (h, e)) in est.h_pairs.iter().enumerate() {
        write!(out, "h = {h:<10} E(h) = {e:.6e}").unwrap();
        if i > 0 {
            write!(out, "  order = {:.4}", est.orders[i - 1]).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn stability_csv(report: &StabilityReport) -> String {
    format!(
        "epsilon,observed,bound\n{},{},{}\n",
        report.epsilon0, report.observed_max_dev, report.bound
    )
}

pub fn stability_text(report: &StabilityReport) -> String {
    format!(
        "epsilon0 = {:e}\nobserved max deviation = {:e}\nbound exp(T L1) epsilon0 = {:e}\nwithin bound: {}\n",
        report.epsilon0,
        report.observed_max_dev,
        report.bound,
        report.within_bound()
    )
}
