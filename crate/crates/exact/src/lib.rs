//! Exact minimization of the number of tardy vehicles by branch and bound
//! over crossing orders, and export of the equivalent big-M model.

mod dcs;
mod mip;
mod search;

pub use dcs::{
    base_system, minimal_times, Constraint, DifferenceConstraints, Mark, MinimalTimesError, Propagator, VarMap, ORIGIN,
};
pub use mip::{
    big_m_values, build_mip, export_mip, parse_lp, stamp_name, write_lp, BigM, Continuous, LpParseError, MipModel,
    Row, Sense,
};
pub use search::{
    conflict_pairs, find_feasible, minimize_makespan, solve_exact, ConflictPair, ExactError, MakespanResult,
    SolveOptions, SolveResult, SolveStatus, TraceNode,
};
