use crate::problem::State;

/// Solution on the uniform grid `t_n = n h`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub t0: f64,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn new(h: f64, initial: State) -> Self {
        Trajectory {
            h,
            t0: 0.0,
            states: vec![initial],
        }
    }

    pub fn with_capacity(h: f64, initial: State, nodes: usize) -> Self {
        let mut states = Vec::with_capacity(nodes);
        states.push(initial);
        Trajectory { h, t0: 0.0, states }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Number of steps `N`.
    pub fn steps(&self) -> usize {
        self.states.len().saturating_sub(1)
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    #[inline]
    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.states.len()).map(|n| self.time(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &State)> + '_ {
        self.states
            .iter()
            .enumerate()
            .map(|(n, y)| (self.time(n), y))
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory is never empty")
    }

    /// Index of the node at time `t`, if `t` lies on the grid within `tol`
    /// (relative to `max(1, |t|)`).
    pub fn node_at(&self, t: f64, tol: f64) -> Option<usize> {
        let n = ((t - self.t0) / self.h).round();
        if n < 0.0 || n as usize >= self.states.len() {
            return None;
        }
        let n = n as usize;
        ((self.time(n) - t).abs() <= tol * t.abs().max(1.0)).then_some(n)
    }

    pub fn state_at(&self, t: f64) -> Option<&State> {
        self.node_at(t, 1e-9).map(|n| &self.states[n])
    }

    /// Single component as a time series.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|y| y[i]).collect()
    }
}

/// Sup norm of `a - b`.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
