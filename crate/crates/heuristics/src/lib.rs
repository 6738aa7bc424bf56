//! Dispatch heuristics: proximity-first right of way at shared vertices,
//! optionally tie-broken by deadline slack, and a best-of-three wrapper.

mod best;
mod dispatch;
mod key;
mod slot;

pub use best::{deadline_and_proximity, deadline_and_proximity_with, BestOfThree, DispatchError};
pub use dispatch::{run_dispatch, run_dispatch_with, DispatchConfig, DispatchOutcome, EventQueue, VehicleStatus};
pub use key::{initial_key, sorting_key, Mode, NegativeSlack, Priority, SortKey, VehicleState};
pub use slot::{earliest_feasible_slot, SlotWindowError};
