//! Single-step update rules.
//!
//! All steppers advance `y_n` at `t_n` to `y_{n+1}` at `t_n + h` given the
//! delayed states `nu_n` and `nu_{n+1}`. They are pure functions of their
//! arguments.

use nalgebra::{DMatrix, DVector};

use crate::config::StageTime;
use crate::error::{Result, SolveError, Stage};
use crate::problem::{DdeProblem, State};

/// Inputs of one step.
///
/// `nu` / `nu_next` are `None` for delay-free problems, in which case the
/// right-hand side receives a copy of its own state argument as the delayed
/// state.
#[derive(Debug, Clone, Copy)]
pub struct StepPoint<'a> {
    pub tn: f64,
    pub h: f64,
    pub y: &'a [f64],
    pub nu: Option<&'a [f64]>,
    pub nu_next: Option<&'a [f64]>,
}

impl<'a> StepPoint<'a> {
    pub fn new(tn: f64, h: f64, y: &'a [f64], nu: &'a [f64], nu_next: &'a [f64]) -> Self {
        StepPoint {
            tn,
            h,
            y,
            nu: Some(nu),
            nu_next: Some(nu_next),
        }
    }

    pub fn delay_free(tn: f64, h: f64, y: &'a [f64]) -> Self {
        StepPoint {
            tn,
            h,
            y,
            nu: None,
            nu_next: None,
        }
    }
}

#[inline]
fn eval(problem: &DdeProblem, t: f64, y: &[f64], nu: Option<&[f64]>) -> State {
    let out = problem.eval(t, y, nu.unwrap_or(y));
    debug_assert_eq!(out.len(), y.len(), "rhs returned wrong dimension");
    out
}

#[inline]
fn checked(v: State, stage: Stage) -> Result<State> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(SolveError::NonFiniteStage { stage })
    }
}

/// `base + scale * dir`.
#[inline]
fn offset(base: &[f64], scale: f64, dir: &[f64]) -> State {
    base.iter().zip(dir).map(|(b, d)| b + scale * d).collect()
}

/// Stage evaluations of one NIM theta step.
///
/// `iterates[0]` is `u_0 = y_n + h(1-theta) k1` (the NIM seed `S_1`), and
/// `iterates[j] = u_0 + h theta slopes[j-1]` with
/// `slopes[j-1] = f(t*, iterates[j-1], nu_{n+1})`. For three terms
/// `slopes = [k2, k3]` and the update is `iterates[2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageValues {
    pub k1: State,
    pub slopes: Vec<State>,
    pub iterates: Vec<State>,
}

impl StageValues {
    pub fn update(&self) -> &State {
        self.iterates.last().expect("at least one iterate")
    }
}

/// Full stage record of [`nim_theta_step`].
pub fn nim_theta_stages(
    problem: &DdeProblem,
    at: &StepPoint<'_>,
    theta: f64,
    k_terms: usize,
    stage_time: StageTime,
) -> Result<StageValues> {
    if k_terms < 2 {
        return Err(SolveError::InvalidConfig(format!(
            "nim_terms must be at least 2, got {k_terms}"
        )));
    }
    let h = at.h;
    let t_next = stage_time.implicit_time(at.tn, h);
    let k1 = checked(eval(problem, at.tn, at.y, at.nu), Stage::K1)?;
    let u0 = offset(at.y, h * (1.0 - theta), &k1);
    let mut slopes = Vec::with_capacity(k_terms - 1);
    let mut iterates = Vec::with_capacity(k_terms);
    iterates.push(u0);
    for j in 2..=k_terms {
        let prev = iterates.last().expect("seeded");
        let slope = checked(eval(problem, t_next, prev, at.nu_next), Stage::Iterate(j))?;
        let next = offset(&iterates[0], h * theta, &slope);
        slopes.push(slope);
        iterates.push(next);
    }
    Ok(StageValues {
        k1,
        slopes,
        iterates,
    })
}

/// One step of the explicit theta-method built from the `k_terms`-term NIM
/// solution of the implicit theta-method:
///
/// ```text
/// u0  = y_n + h(1-θ) f(t_n, y_n, ν_n)
/// S_1 = u0,  S_j = u0 + hθ f(t_{n+1}, S_{j-1}, ν_{n+1}),  j = 2..k
/// y_{n+1} = S_k
/// ```
///
/// `k_terms = 3` gives the three-stage scheme with `k2 = f(t_{n+1}, u0, ·)`,
/// `k3 = f(t_{n+1}, u0 + hθ k2, ·)` and `y_{n+1} = u0 + hθ k3`.
pub fn nim_theta_step(
    problem: &DdeProblem,
    at: &StepPoint<'_>,
    theta: f64,
    k_terms: usize,
    stage_time: StageTime,
) -> Result<State> {
    if k_terms < 2 {
        return Err(SolveError::InvalidConfig(format!(
            "nim_terms must be at least 2, got {k_terms}"
        )));
    }
    let h = at.h;
    let t_next = stage_time.implicit_time(at.tn, h);
    let k1 = checked(eval(problem, at.tn, at.y, at.nu), Stage::K1)?;
    let u0 = offset(at.y, h * (1.0 - theta), &k1);
    let mut s = u0.clone();
    for j in 2..=k_terms {
        let slope = checked(eval(problem, t_next, &s, at.nu_next), Stage::Iterate(j))?;
        s = offset(&u0, h * theta, &slope);
    }
    checked(s, Stage::Update)
}

pub fn explicit_euler_step(problem: &DdeProblem, at: &StepPoint<'_>) -> Result<State> {
    let k1 = checked(eval(problem, at.tn, at.y, at.nu), Stage::K1)?;
    checked(offset(at.y, at.h, &k1), Stage::Update)
}

pub fn heun_step(problem: &DdeProblem, at: &StepPoint<'_>) -> Result<State> {
    let h = at.h;
    let k1 = checked(eval(problem, at.tn, at.y, at.nu), Stage::K1)?;
    let predictor = offset(at.y, h, &k1);
    let k2 = checked(eval(problem, at.tn + h, &predictor, at.nu_next), Stage::K2)?;
    let y =
        at.y.iter()
            .zip(k1.iter().zip(&k2))
            .map(|(y, (a, b))| y + (h / 2.0) * (a + b))
            .collect();
    checked(y, Stage::Update)
}

/// Solves the implicit theta-method
/// `y = y_n + h(1-θ) f(t_n, y_n, ν_n) + hθ f(t_{n+1}, y, ν_{n+1})`
/// by Newton iteration from `y_n` with a forward-difference Jacobian.
///
/// Converged when the residual sup-norm is at most `tol`. `theta == 0` is the
/// explicit Euler step.
pub fn implicit_theta_step_newton(
    problem: &DdeProblem,
    at: &StepPoint<'_>,
    theta: f64,
    stage_time: StageTime,
    tol: f64,
    max_iter: usize,
) -> Result<State> {
    if theta == 0.0 {
        return explicit_euler_step(problem, at);
    }
    let h = at.h;
    let dim = at.y.len();
    let t_next = stage_time.implicit_time(at.tn, h);
    let k1 = checked(eval(problem, at.tn, at.y, at.nu), Stage::K1)?;
    let known = offset(at.y, h * (1.0 - theta), &k1);
    let weight = h * theta;

    let implicit_rhs = |z: &[f64]| eval(problem, t_next, z, at.nu_next);
    let residual = |z: &[f64], fz: &[f64]| -> State {
        (0..dim).map(|i| z[i] - known[i] - weight * fz[i]).collect()
    };

    let mut z = at.y.to_vec();
    let mut iterations = 0;
    loop {
        let fz = checked(implicit_rhs(&z), Stage::Newton)?;
        let r = residual(&z, &fz);
        let norm = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !norm.is_finite() {
            return Err(SolveError::NonFiniteStage {
                stage: Stage::Newton,
            });
        }
        if norm <= tol {
            return Ok(z);
        }
        if iterations == max_iter {
            return Err(SolveError::NewtonNoConvergence {
                iterations,
                residual: norm,
            });
        }

        // J = I - hθ ∂f/∂y, columns by forward differences
        let mut jac = DMatrix::<f64>::identity(dim, dim);
        let mut zp = z.clone();
        for j in 0..dim {
            let step = f64::EPSILON.sqrt() * z[j].abs().max(1.0);
            zp[j] = z[j] + step;
            let fp = checked(implicit_rhs(&zp), Stage::Newton)?;
            zp[j] = z[j];
            for i in 0..dim {
                jac[(i, j)] -= weight * (fp[i] - fz[i]) / step;
            }
        }
        let rhs = DVector::from_iterator(dim, r.iter().map(|v| -v));
        let dz = jac.lu().solve(&rhs).ok_or(SolveError::SingularJacobian)?;
        for (zi, d) in z.iter_mut().zip(dz.iter()) {
            *zi += d;
        }
        iterations += 1;
    }
}
