//! Synchronous master-equation dynamics and the exact steady state.
//!
//! Every agent is updated from the pre-step states:
//! `x'_i = s x_i + sum_j F[i][j] x_j + source_i`.
//! The first injection happens at `t = 0`, so a trajectory starts at the
//! source vector rather than at zero.

use alloc::vec::Vec;

use crate::linalg::{self, Matrix};
use crate::topology::FlowSystem;
use crate::{abs, Error};

/// One synchronous update of `x`.
pub fn step(system: &FlowSystem, x: &[f64]) -> Result<Vec<f64>, Error> {
    let n = system.n_agents;
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let mut next = system.forward_matrix.mul_vec(x)?;
    for ((xi, &prev), &src) in next.iter_mut().zip(x).zip(&system.source_vector) {
        *xi += system.s * prev + src;
    }
    Ok(next)
}

/// States `x(0), ..., x(T)` of one run, together with the system.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Matrix,
    system: FlowSystem,
}

impl Trajectory {
    /// Wraps precomputed states, one row per step.
    pub fn from_states(system: FlowSystem, states: Matrix) -> Result<Self, Error> {
        if states.cols() != system.n_agents {
            return Err(Error::DimensionMismatch {
                expected: system.n_agents,
                found: states.cols(),
            });
        }
        Ok(Trajectory { states, system })
    }

    pub fn states(&self) -> &Matrix {
        &self.states
    }

    pub fn system(&self) -> &FlowSystem {
        &self.system
    }

    /// Number of recorded rows (`T + 1` for a `T`-step run).
    pub fn len(&self) -> usize {
        self.states.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.states.rows() == 0
    }

    /// Last step index, `T`.
    pub fn horizon(&self) -> usize {
        self.len().saturating_sub(1)
    }

    pub fn at(&self, t: usize) -> &[f64] {
        self.states.row(t)
    }

    pub fn last(&self) -> Option<&[f64]> {
        (!self.is_empty()).then(|| self.states.row(self.len() - 1))
    }

    /// State of agent `i` over time.
    pub fn agent(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.states.column(i)
    }
}

/// Runs `steps` synchronous updates starting from the first injection.
pub fn simulate(system: &FlowSystem, steps: usize) -> Trajectory {
    let n = system.n_agents;
    let update = system.update_matrix();
    let mut states = Matrix::zeros(0, n);
    let mut x = system.source_vector.clone();
    states.push_row(&x);
    let mut next = alloc::vec![0.0; n];
    for _ in 0..steps {
        for (i, out) in next.iter_mut().enumerate() {
            *out = update.row(i).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>()
                + system.source_vector[i];
        }
        core::mem::swap(&mut x, &mut next);
        states.push_row(&x);
    }
    Trajectory {
        states,
        system: system.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub x_eq: Vec<f64>,
    /// `max_i |step(x_eq)_i - x_eq_i|`.
    pub residual: f64,
}

impl SteadyState {
    pub fn max_state(&self) -> f64 {
        self.x_eq.iter().copied().fold(0.0, f64::max)
    }
}

/// Solves `(I - s I - F) x = source` for the fixed point.
///
/// Fails with [`Error::NoSteadyState`] when the system has no sink, that is
/// `e = 0` and no agent wastes its forwarded share.
pub fn equilibrium(system: &FlowSystem) -> Result<SteadyState, Error> {
    let n = system.n_agents;
    let mut lhs = system.update_matrix();
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            lhs[(i, j)] = delta - lhs[(i, j)];
        }
    }
    let x_eq = linalg::solve(&lhs, &system.source_vector)?;
    let after = step(system, &x_eq)?;
    let residual = after
        .iter()
        .zip(&x_eq)
        .fold(0.0, |m, (a, b)| f64::max(m, abs(a - b)));
    Ok(SteadyState { x_eq, residual })
}
