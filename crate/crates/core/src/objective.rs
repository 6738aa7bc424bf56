use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::instance::Instance;
use crate::schedule::{Schedule, ShapeError};
use crate::time::Tick;

/// Objective function to minimise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectiveKind {
    /// `C_max`
    Makespan,
    /// `Σ C_j`
    TotalCompletion,
    /// `Σ w_j C_j`
    TotalWeightedCompletion,
    /// `L_max`
    MaxLateness,
    /// `Σ T_j`
    TotalTardiness,
    /// `Σ U_j`
    TardyCount,
    /// `Σ w_j U_j`
    WeightedTardyCount,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 7] = [
        ObjectiveKind::Makespan,
        ObjectiveKind::TotalCompletion,
        ObjectiveKind::TotalWeightedCompletion,
        ObjectiveKind::MaxLateness,
        ObjectiveKind::TotalTardiness,
        ObjectiveKind::TardyCount,
        ObjectiveKind::WeightedTardyCount,
    ];

    pub fn is_weighted(self) -> bool {
        matches!(self, ObjectiveKind::TotalWeightedCompletion | ObjectiveKind::WeightedTardyCount)
    }

    /// Name used in instance files.
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::Makespan => "makespan",
            ObjectiveKind::TotalCompletion => "total_completion",
            ObjectiveKind::TotalWeightedCompletion => "total_weighted_completion",
            ObjectiveKind::MaxLateness => "max_lateness",
            ObjectiveKind::TotalTardiness => "total_tardiness",
            ObjectiveKind::TardyCount => "tardy_count",
            ObjectiveKind::WeightedTardyCount => "weighted_tardy_count",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown objective `{0}`")]
pub struct UnknownObjective(pub String);

impl FromStr for ObjectiveKind {
    type Err = UnknownObjective;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownObjective(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObjectiveError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("objective {0} requires vehicle weights but the instance has none")]
    MissingWeights(ObjectiveKind),
}

/// Per-vehicle quantities derived from a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VehicleMetrics {
    /// `C_j`
    pub completion: Tick,
    /// `L_j = C_j - d_j`; `None` when the soft deadline is `+∞` (lateness `-∞`).
    pub lateness: Option<Tick>,
    /// `T_j = max(0, L_j)`
    pub tardiness: Tick,
    /// `U_j`: completion strictly after the soft deadline.
    pub tardy: bool,
}

pub fn vehicle_metrics(instance: &Instance, schedule: &Schedule, vehicle: usize) -> VehicleMetrics {
    let completion = schedule.completion(vehicle);
    let lateness = instance.d_soft(vehicle).map(|d| completion - d);
    let tardiness = lateness.map_or(0, |l| l.max(0));
    VehicleMetrics { completion, lateness, tardiness, tardy: tardiness > 0 }
}

/// Aggregate objective value of a schedule.
///
/// With no vehicles, sums and the makespan are 0 and the maximum lateness is
/// `-∞`; a vehicle without a soft deadline has lateness `-∞`.
pub fn evaluate(instance: &Instance, schedule: &Schedule, kind: ObjectiveKind) -> Result<f64, ObjectiveError> {
    schedule.check_shape(instance)?;
    if kind.is_weighted() && instance.weights().is_none() {
        return Err(ObjectiveError::MissingWeights(kind));
    }
    let metrics = (0..instance.vehicle_count()).map(|j| (j, vehicle_metrics(instance, schedule, j)));
    let value = match kind {
        ObjectiveKind::Makespan => metrics.map(|(_, m)| m.completion).max().unwrap_or(0) as f64,
        ObjectiveKind::TotalCompletion => metrics.map(|(_, m)| m.completion as f64).sum(),
        ObjectiveKind::TotalWeightedCompletion => metrics.map(|(j, m)| instance.weight(j) * m.completion as f64).sum(),
        ObjectiveKind::MaxLateness => {
            metrics.map(|(_, m)| m.lateness.map_or(f64::NEG_INFINITY, |l| l as f64)).fold(f64::NEG_INFINITY, f64::max)
        }
        ObjectiveKind::TotalTardiness => metrics.map(|(_, m)| m.tardiness as f64).sum(),
        ObjectiveKind::TardyCount => metrics.filter(|(_, m)| m.tardy).count() as f64,
        ObjectiveKind::WeightedTardyCount => metrics.filter(|(_, m)| m.tardy).map(|(j, _)| instance.weight(j)).sum(),
    };
    Ok(value)
}

/// Sum of minimum link times over a vehicle's walk: its trip time when no
/// other vehicle is present.
pub fn min_free_trip_time(instance: &Instance, vehicle: usize) -> Tick {
    instance.walk(vehicle).remaining_min_time(0)
}
