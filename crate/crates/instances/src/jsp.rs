//! Unit-time job shop instances and their encoding as vehicle scheduling
//! instances.
//!
//! Machines become the vertices of a complete digraph, each job becomes a walk
//! through its machine sequence, every operation takes one tick (`tau_min =
//! 1`), and two operations on the same machine are kept apart by a separation
//! of 1. The no-wait flag pins `tau_max` to 1. A vehicle schedule maps back to
//! operation start times unchanged.

use thiserror::Error;
use vsp_core::{Graph, Instance, InstanceError, InstanceParts, ObjectiveKind, Schedule, Tick, Walk};

#[derive(Debug, Clone, PartialEq)]
pub struct JspInstance {
    pub machines: usize,
    /// Machine index of each operation, per job.
    pub jobs: Vec<Vec<usize>>,
    /// Release dates.
    pub r: Vec<Tick>,
    /// Deadlines, `None` for none.
    pub delta: Vec<Option<Tick>>,
    /// No-wait: each operation starts exactly one tick after the previous.
    pub theta: bool,
    /// Deadlines are hard (must be met) rather than soft.
    pub hard_deadlines: bool,
    pub objective: ObjectiveKind,
    pub weights: Option<Vec<f64>>,
}

impl JspInstance {
    /// Jobs released at 0 with no deadlines, waiting allowed, makespan
    /// objective.
    pub fn new(machines: usize, jobs: Vec<Vec<usize>>) -> Self {
        let n = jobs.len();
        Self {
            machines,
            jobs,
            r: vec![0; n],
            delta: vec![None; n],
            theta: false,
            hard_deadlines: false,
            objective: ObjectiveKind::Makespan,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("job shop needs at least one machine")]
    NoMachines,
    #[error("`{field}` has {found} entries, expected one per job ({expected})")]
    LengthMismatch { field: &'static str, expected: usize, found: usize },
    #[error("job {job} has no operations")]
    EmptyJob { job: usize },
    #[error("job {job}, operation {op}: machine {machine} does not exist")]
    UnknownMachine { job: usize, op: usize, machine: usize },
    #[error("job {job}: operations {op} and {} both use machine {machine}; consecutive repeats would need a self-loop", op + 1)]
    RepeatedMachine { job: usize, op: usize, machine: usize },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

pub fn reduce_jsp_to_vsp(jsp: &JspInstance) -> Result<Instance, ReductionError> {
    if jsp.machines == 0 {
        return Err(ReductionError::NoMachines);
    }
    let n = jsp.jobs.len();
    for (field, found) in [("r", jsp.r.len()), ("delta", jsp.delta.len())] {
        if found != n {
            return Err(ReductionError::LengthMismatch { field, expected: n, found });
        }
    }
    for (job, ops) in jsp.jobs.iter().enumerate() {
        if ops.is_empty() {
            return Err(ReductionError::EmptyJob { job });
        }
        if let Some(op) = ops.iter().position(|&m| m >= jsp.machines) {
            return Err(ReductionError::UnknownMachine { job, op, machine: ops[op] });
        }
        if let Some(op) = ops.windows(2).position(|w| w[0] == w[1]) {
            return Err(ReductionError::RepeatedMachine { job, op, machine: ops[op] });
        }
    }

    let graph = Graph::complete(jsp.machines).map_err(InstanceError::from)?;
    let tau_max = jsp.theta.then_some(1);
    let walks = jsp.jobs.iter().map(|ops| Walk::uniform(ops.clone(), 1, tau_max)).collect();
    let mut parts = InstanceParts::new(graph, walks).with_uniform_separation(1);
    parts.rho = jsp.r.clone();
    parts.d_soft = jsp.delta.clone();
    parts.d_hard = if jsp.hard_deadlines { jsp.delta.clone() } else { vec![None; n] };
    parts.objective = jsp.objective;
    parts.weights = jsp.weights.clone();
    Ok(Instance::new(parts)?)
}

/// Operation start times `x_j^i` from a schedule of the reduced instance.
pub fn jsp_start_times(schedule: &Schedule) -> Vec<Vec<Tick>> {
    schedule.times().to_vec()
}
