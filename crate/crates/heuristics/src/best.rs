use thiserror::Error;
use vsp_core::{evaluate, Instance, Schedule};

use crate::dispatch::{run_dispatch_with, DispatchConfig, DispatchOutcome};
use crate::key::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DispatchError {
    #[error("every dispatch mode left at least one vehicle without a feasible slot")]
    AllModesFailed { outcomes: Vec<DispatchOutcome> },
}

/// Result of running all three modes and keeping the best.
#[derive(Debug, Clone, PartialEq)]
pub struct BestOfThree {
    pub chosen: Mode,
    pub schedule: Schedule,
    pub objective: f64,
    /// One outcome per mode, in [`Mode::ALL`] order.
    pub outcomes: Vec<DispatchOutcome>,
}

impl BestOfThree {
    pub fn outcome(&self) -> &DispatchOutcome {
        &self.outcomes[Mode::ALL.iter().position(|&m| m == self.chosen).expect("chosen mode ran")]
    }
}

pub fn deadline_and_proximity(instance: &Instance) -> Result<BestOfThree, DispatchError> {
    deadline_and_proximity_with(instance, &DispatchConfig::default())
}

/// Runs every [`Mode`] and returns the complete schedule with the smallest
/// value of the instance's objective. Ties go to fewer hard-deadline
/// violations, then to the earlier mode in [`Mode::ALL`].
pub fn deadline_and_proximity_with(instance: &Instance, config: &DispatchConfig) -> Result<BestOfThree, DispatchError> {
    let outcomes: Vec<DispatchOutcome> = Mode::ALL.iter().map(|&m| run_dispatch_with(instance, m, config)).collect();

    let mut best: Option<(f64, usize, usize, Schedule)> = None;
    for (idx, outcome) in outcomes.iter().enumerate() {
        let Some(schedule) = outcome.schedule() else { continue };
        let value = evaluate(instance, &schedule, instance.objective()).expect("validated instance carries its weights");
        let hard = outcome.hard_deadline_violations();
        let better = match &best {
            None => true,
            Some((bv, bh, _, _)) => value < *bv || (value == *bv && hard < *bh),
        };
        if better {
            best = Some((value, hard, idx, schedule));
        }
    }

    match best {
        Some((objective, _, idx, schedule)) => Ok(BestOfThree { chosen: Mode::ALL[idx], schedule, objective, outcomes }),
        None => Err(DispatchError::AllModesFailed { outcomes }),
    }
}
