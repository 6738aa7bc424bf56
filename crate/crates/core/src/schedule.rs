use thiserror::Error;

use crate::instance::{Instance, Visit};
use crate::time::Tick;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("schedule has {found} vehicles, instance has {expected}")]
    VehicleCount { expected: usize, found: usize },
    #[error("vehicle {vehicle}: schedule has {found} stamps, walk has {expected} vertices")]
    StampCount { vehicle: usize, expected: usize, found: usize },
}

/// Arrival stamps `times[j][i]` for every vertex of every walk.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    times: Vec<Vec<Tick>>,
}

impl Schedule {
    pub fn new(times: Vec<Vec<Tick>>) -> Self {
        Self { times }
    }

    pub fn times(&self) -> &[Vec<Tick>] {
        &self.times
    }

    pub fn into_times(self) -> Vec<Vec<Tick>> {
        self.times
    }

    pub fn vehicle(&self, vehicle: usize) -> &[Tick] {
        &self.times[vehicle]
    }

    pub fn at(&self, visit: Visit) -> Tick {
        self.times[visit.vehicle][visit.step]
    }

    /// Last stamp of a vehicle, `C_j`.
    pub fn completion(&self, vehicle: usize) -> Tick {
        *self.times[vehicle].last().expect("walks are non-empty")
    }

    pub fn check_shape(&self, instance: &Instance) -> Result<(), ShapeError> {
        if self.times.len() != instance.vehicle_count() {
            return Err(ShapeError::VehicleCount { expected: instance.vehicle_count(), found: self.times.len() });
        }
        for (vehicle, (stamps, walk)) in self.times.iter().zip(instance.walks()).enumerate() {
            if stamps.len() != walk.len() {
                return Err(ShapeError::StampCount { vehicle, expected: walk.len(), found: stamps.len() });
            }
        }
        Ok(())
    }
}
