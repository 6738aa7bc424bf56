//! Instance sources: random grid experiments, unit-time job shop reduction,
//! and JSON files.

mod generate;
mod grid;
mod io;
mod jsp;

pub use generate::{
    default_ratios, generate_grid_instance, instance_seed, ExperimentConfig, GenerateError, HardDeadlineBasis,
};
pub use grid::{distances_to, shortest_path, GridSpec};
pub use io::{
    instance_from_json, instance_to_json, jsp_from_json, jsp_to_json, read_instance, read_jsp, read_schedule,
    schedule_from_json, schedule_to_json, write_instance, write_jsp, write_schedule, FormatError,
};
pub use jsp::{jsp_start_times, reduce_jsp_to_vsp, JspInstance, ReductionError};
