use std::fmt;

use crate::instance::{Instance, Visit};
use crate::schedule::{Schedule, ShapeError};
use crate::time::Tick;

/// Which family of constraints a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintClass {
    /// `rho_j <= t_j^1`.
    RequestTime,
    /// `t_j^i <= t_j^{i+1}`.
    Continuity,
    /// `t_j^{q_j} <= d'_j`.
    HardDeadline,
    /// `tau_min <= t_j^{i+1} - t_j^i`.
    MinTravelTime,
    /// `t_j^{i+1} - t_j^i <= tau_max`.
    MaxTravelTime,
    /// `|t_a - t_b| >= s`.
    Separation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    RequestTime { vehicle: usize, start: Tick, rho: Tick },
    Continuity { vehicle: usize, step: usize },
    HardDeadline { vehicle: usize, completion: Tick, deadline: Tick },
    MinTravelTime { vehicle: usize, link: usize, elapsed: Tick, tau_min: Tick },
    MaxTravelTime { vehicle: usize, link: usize, elapsed: Tick, tau_max: Tick },
    Separation { a: Visit, b: Visit, gap: Tick, required: Tick },
}

impl Violation {
    pub fn class(&self) -> ConstraintClass {
        match self {
            Violation::RequestTime { .. } => ConstraintClass::RequestTime,
            Violation::Continuity { .. } => ConstraintClass::Continuity,
            Violation::HardDeadline { .. } => ConstraintClass::HardDeadline,
            Violation::MinTravelTime { .. } => ConstraintClass::MinTravelTime,
            Violation::MaxTravelTime { .. } => ConstraintClass::MaxTravelTime,
            Violation::Separation { .. } => ConstraintClass::Separation,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RequestTime { vehicle, start, rho } => {
                write!(f, "vehicle {vehicle} starts at {start} before its request time {rho}")
            }
            Violation::Continuity { vehicle, step } => {
                write!(f, "vehicle {vehicle}: stamp {} precedes stamp {step}", step + 1)
            }
            Violation::HardDeadline { vehicle, completion, deadline } => {
                write!(f, "vehicle {vehicle} completes at {completion} after its hard deadline {deadline}")
            }
            Violation::MinTravelTime { vehicle, link, elapsed, tau_min } => {
                write!(f, "vehicle {vehicle}, link {link}: travel time {elapsed} below minimum {tau_min}")
            }
            Violation::MaxTravelTime { vehicle, link, elapsed, tau_max } => {
                write!(f, "vehicle {vehicle}, link {link}: travel time {elapsed} above maximum {tau_max}")
            }
            Violation::Separation { a, b, gap, required } => {
                write!(f, "visits {a} and {b} are {gap} apart, separation {required} required")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn count(&self, class: ConstraintClass) -> usize {
        self.violations.iter().filter(|v| v.class() == class).count()
    }

    /// Report without hard-deadline violations; what a dispatch heuristic
    /// guarantees.
    pub fn without_hard_deadlines(&self) -> ValidationReport {
        ValidationReport {
            violations: self.violations.iter().filter(|v| v.class() != ConstraintClass::HardDeadline).cloned().collect(),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a schedule against request times, continuity, hard deadlines,
/// travel time windows and separations. Every violation is listed; each
/// separation pair is checked once.
pub fn validate_schedule(instance: &Instance, schedule: &Schedule) -> Result<ValidationReport, ShapeError> {
    schedule.check_shape(instance)?;
    let mut violations = Vec::new();

    for (vehicle, walk) in instance.walks().iter().enumerate() {
        let t = schedule.vehicle(vehicle);
        let rho = instance.rho(vehicle);
        if t[0] < rho {
            violations.push(Violation::RequestTime { vehicle, start: t[0], rho });
        }
        for link in 0..walk.link_count() {
            let elapsed = t[link + 1] - t[link];
            if elapsed < 0 {
                violations.push(Violation::Continuity { vehicle, step: link });
            }
            if elapsed < walk.tau_min[link] {
                violations.push(Violation::MinTravelTime { vehicle, link, elapsed, tau_min: walk.tau_min[link] });
            }
            if let Some(tau_max) = walk.tau_max[link] {
                if elapsed > tau_max {
                    violations.push(Violation::MaxTravelTime { vehicle, link, elapsed, tau_max });
                }
            }
        }
        if let Some(deadline) = instance.d_hard(vehicle) {
            let completion = schedule.completion(vehicle);
            if completion > deadline {
                violations.push(Violation::HardDeadline { vehicle, completion, deadline });
            }
        }
    }

    for (a, b, required) in instance.separations().iter() {
        let gap = (schedule.at(a) - schedule.at(b)).abs();
        if gap < required {
            violations.push(Violation::Separation { a, b, gap, required });
        }
    }

    Ok(ValidationReport { violations })
}
