//! Performance parameters of a run: total work, state dispersion and
//! transition time, plus the steady-state mass balance.

use alloc::vec::Vec;

use crate::dynamics::{self, SteadyState, Trajectory};
use crate::topology::{self, ArchKind, ArchitectureSpec, FlowParams, FlowSystem};
use crate::{abs, sqrt, Error};

/// Fraction of the equilibrium state the transition time waits for.
pub const DEFAULT_THRESHOLD: f64 = 0.8;

/// Steady-state work per step normalized by the supply rate.
///
/// Equals 1 when nothing is wasted and `w = 1`.
pub fn total_work(x_eq: &[f64], system: &FlowSystem) -> f64 {
    per_agent_work(x_eq, system).iter().sum()
}

/// `e w x_eq_i / b` for every agent.
pub fn per_agent_work(x_eq: &[f64], system: &FlowSystem) -> Vec<f64> {
    let scale = system.e * system.w / system.b;
    x_eq.iter().map(|x| scale * x).collect()
}

/// Work accumulated by each agent over every recorded step of a run,
/// `e w sum_t x_i(t)`. Unlike [`total_work`] this grows with the horizon.
pub fn cumulative_work(trajectory: &Trajectory) -> Vec<f64> {
    let system = trajectory.system();
    let scale = system.e * system.w;
    (0..system.n_agents)
        .map(|i| scale * trajectory.agent(i).sum::<f64>())
        .collect()
}

/// Population standard deviation of the states.
pub fn dispersion(x_eq: &[f64]) -> f64 {
    if x_eq.is_empty() {
        return 0.0;
    }
    let n = x_eq.len() as f64;
    let mean = x_eq.iter().sum::<f64>() / n;
    let var = x_eq.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    sqrt(var)
}

/// Which agents must have crossed the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TransitionRule {
    /// The first step at which any agent reaches its threshold. On the
    /// sequential designs this is the agent fed by the source.
    #[default]
    FirstAgent,
    /// The first step at which every agent has reached its threshold.
    AllAgents,
}

fn check_threshold(threshold: f64) -> Result<(), Error> {
    if threshold > 0.0 && threshold < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(threshold))
    }
}

fn crossed(x: f64, eq: f64, threshold: f64) -> bool {
    x >= threshold * eq
}

/// Per-agent first step at which `x_i(t) >= threshold * x_eq_i`.
pub fn agent_transition_times(
    trajectory: &Trajectory,
    x_eq: &[f64],
    threshold: f64,
) -> Result<Vec<Option<usize>>, Error> {
    check_threshold(threshold)?;
    let n = trajectory.system().n_agents;
    if x_eq.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x_eq.len(),
        });
    }
    Ok((0..n)
        .map(|i| {
            trajectory
                .agent(i)
                .position(|x| crossed(x, x_eq[i], threshold))
        })
        .collect())
}

/// Transition time under [`TransitionRule::FirstAgent`].
pub fn transition_time(trajectory: &Trajectory, x_eq: &[f64], threshold: f64) -> Result<usize, Error> {
    transition_time_with(trajectory, x_eq, threshold, TransitionRule::FirstAgent)
}

pub fn transition_time_with(
    trajectory: &Trajectory,
    x_eq: &[f64],
    threshold: f64,
    rule: TransitionRule,
) -> Result<usize, Error> {
    if trajectory.is_empty() {
        return Err(Error::Empty);
    }
    let times = agent_transition_times(trajectory, x_eq, threshold)?;
    let too_short = Error::HorizonTooShort {
        steps: trajectory.horizon(),
    };
    match rule {
        TransitionRule::FirstAgent => times.into_iter().flatten().min().ok_or(too_short),
        TransitionRule::AllAgents => times
            .into_iter()
            .try_fold(0, |acc, t| t.map(|t| acc.max(t)))
            .ok_or(too_short),
    }
}

/// Steady-state flows out of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassBalance {
    /// `e * sum x_eq`.
    pub work_rate: f64,
    /// Forwarded share of agents without out-neighbours.
    pub waste_rate: f64,
    /// `|b - work_rate - waste_rate|`.
    pub residual: f64,
}

pub fn mass_balance(x_eq: &[f64], system: &FlowSystem) -> MassBalance {
    let work_rate = system.e * x_eq.iter().sum::<f64>();
    let waste_rate = system.f * system.wasting_agents().map(|i| x_eq[i]).sum::<f64>();
    MassBalance {
        work_rate,
        waste_rate,
        residual: abs(system.b - work_rate - waste_rate),
    }
}

/// The three performance parameters of one architecture and configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub arch: ArchKind,
    pub s: f64,
    pub f: f64,
    pub e: f64,
    pub b: f64,
    pub w: f64,
    pub total_work: f64,
    pub per_agent_work: Vec<f64>,
    /// Computed on states divided by `b`.
    pub dispersion: f64,
    pub transition_time: usize,
}

impl MetricsRecord {
    pub fn from_run(
        arch: ArchKind,
        trajectory: &Trajectory,
        steady: &SteadyState,
        threshold: f64,
    ) -> Result<Self, Error> {
        let system = trajectory.system();
        let per_agent_work = per_agent_work(&steady.x_eq, system);
        let normalized: Vec<f64> = steady.x_eq.iter().map(|x| x / system.b).collect();
        Ok(MetricsRecord {
            arch,
            s: system.s,
            f: system.f,
            e: system.e,
            b: system.b,
            w: system.w,
            total_work: per_agent_work.iter().sum(),
            per_agent_work,
            dispersion: dispersion(&normalized),
            transition_time: transition_time(trajectory, &steady.x_eq, threshold)?,
        })
    }
}

/// Everything produced by one simulated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub trajectory: Trajectory,
    pub steady: SteadyState,
    pub record: MetricsRecord,
}

/// Builds, simulates for `steps`, solves and measures one architecture.
pub fn evaluate(
    spec: ArchitectureSpec,
    params: FlowParams,
    steps: usize,
    threshold: f64,
) -> Result<Evaluation, Error> {
    check_threshold(threshold)?;
    let system = topology::build_architecture(spec, params)?;
    let steady = dynamics::equilibrium(&system)?;
    let trajectory = dynamics::simulate(&system, steps);
    let record = MetricsRecord::from_run(spec.kind(), &trajectory, &steady, threshold)?;
    Ok(Evaluation {
        trajectory,
        steady,
        record,
    })
}
