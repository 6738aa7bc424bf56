use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use vsp_core::{Instance, Tick};

/// Priority rule used when several vehicles compete for the same vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Closest vehicle first, ties by vehicle id.
    Proximity,
    /// Closest first, ties by remaining delay slack.
    AbsDeadlineProximity,
    /// Closest first, ties by remaining delay slack per remaining vertex.
    RelDeadlineProximity,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Proximity, Mode::AbsDeadlineProximity, Mode::RelDeadlineProximity];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Proximity => "proximity",
            Mode::AbsDeadlineProximity => "abs",
            Mode::RelDeadlineProximity => "rel",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

/// How vehicles whose delay slack is already negative are ranked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum NegativeSlack {
    /// After every vehicle with non-negative slack, among themselves by id.
    #[default]
    LowestPriority,
    /// `max(0, slack)`: a negative slack ties with zero slack at the top.
    ClampToZero,
}

/// Secondary component of a [`SortKey`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Priority {
    /// Proximity mode carries no secondary value.
    Unranked,
    /// Non-negative remaining slack (absolute or per remaining vertex).
    Slack(Ratio<i64>),
    /// Slack already negative under [`NegativeSlack::LowestPriority`].
    Exhausted,
}

/// Lexicographic dispatch key: time distance to the next vertex, then
/// priority, then vehicle id. Smaller keys go first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortKey {
    pub first: Tick,
    pub second: Priority,
    pub vehicle: usize,
}

/// Where a vehicle stands when it is ranked: sitting at `step` of its walk
/// with arrival stamp `stamp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VehicleState {
    pub vehicle: usize,
    pub step: usize,
    pub stamp: Tick,
}

fn priority(instance: &Instance, state: VehicleState, mode: Mode, policy: NegativeSlack) -> Priority {
    let walk = instance.walk(state.vehicle);
    let Some(deadline) = instance.d_soft(state.vehicle) else {
        // unbounded slack ranks after any finite slack
        return match mode {
            Mode::Proximity => Priority::Unranked,
            _ => Priority::Slack(Ratio::from_integer(i64::MAX)),
        };
    };
    let slack = deadline - (state.stamp + walk.remaining_min_time(state.step));
    let remaining_vertices = (walk.len() - 1 - state.step).max(1) as i64;
    let value = match mode {
        Mode::Proximity => return Priority::Unranked,
        Mode::AbsDeadlineProximity => Ratio::from_integer(slack),
        Mode::RelDeadlineProximity => Ratio::new(slack, remaining_vertices),
    };
    if slack < 0 {
        match policy {
            NegativeSlack::LowestPriority => Priority::Exhausted,
            NegativeSlack::ClampToZero => Priority::Slack(Ratio::from_integer(0)),
        }
    } else {
        Priority::Slack(value)
    }
}

/// Key of a vehicle waiting at a vertex with at least one vertex left.
pub fn sorting_key(instance: &Instance, state: VehicleState, mode: Mode, policy: NegativeSlack) -> SortKey {
    let first = instance.walk(state.vehicle).tau_min[state.step];
    SortKey { first, second: priority(instance, state, mode, policy), vehicle: state.vehicle }
}

/// Key used to order vehicles before their first stamps are assigned: the
/// time distance is the request time itself and slack is measured from it.
pub fn initial_key(instance: &Instance, vehicle: usize, mode: Mode, policy: NegativeSlack) -> SortKey {
    let rho = instance.rho(vehicle);
    let state = VehicleState { vehicle, step: 0, stamp: rho };
    SortKey { first: rho, second: priority(instance, state, mode, policy), vehicle }
}
