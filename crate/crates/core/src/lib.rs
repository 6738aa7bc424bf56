//! Core model for the vehicle scheduling problem.
//!
//! A problem instance consists of a directed traffic network, one fixed walk per
//! vehicle, per-link travel time windows, request times, soft and hard
//! deadlines, and pairwise separation gaps between distinct vehicles that pass
//! through the same vertex. A schedule assigns an integer arrival stamp to every
//! vertex of every walk.
//!
//! All times are integer ticks (see [`TimeScale`]); `None` stands for `+∞`
//! wherever a bound may be unbounded. Validation therefore uses exact
//! comparisons and carries no tolerance parameter.

mod graph;
mod instance;
mod objective;
mod schedule;
mod time;
mod validate;

pub use graph::{Graph, GraphError};
pub use instance::{Instance, InstanceError, InstanceParts, Separations, Visit, Walk};
pub use objective::{evaluate, min_free_trip_time, vehicle_metrics, ObjectiveError, ObjectiveKind, VehicleMetrics};
pub use schedule::{Schedule, ShapeError};
pub use time::{Tick, TimeScale};
pub use validate::{validate_schedule, ConstraintClass, ValidationReport, Violation};
