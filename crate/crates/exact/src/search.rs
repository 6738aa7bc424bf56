//! Branch and bound over the crossing order of conflict pairs.
//!
//! A node is a set of decided pairs, represented only by the constraints they
//! add to a [`Propagator`]. Its minimal times satisfy every decided pair, so
//! the undecided pairs they violate are exactly the ones left to branch on.
//! When none is violated the minimal times are a feasible schedule which is
//! optimal for the subtree, because tardiness is nondecreasing in completion
//! time and every completion is already as early as the decisions allow. The
//! same monotonicity makes the tardiness of the minimal times a lower bound.

use std::time::{Duration, Instant};

use thiserror::Error;
use vsp_core::{Instance, ObjectiveKind, Schedule, Tick, Visit};

use crate::dcs::{base_system, minimal_times, Constraint, MinimalTimesError, Propagator, VarMap};

/// One shared-vertex pair with a positive separation, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConflictPair {
    pub a: Visit,
    pub b: Visit,
    pub s: Tick,
}

/// Conflict pairs in canonical order. Zero separations impose nothing and
/// are skipped.
pub fn conflict_pairs(instance: &Instance) -> Vec<ConflictPair> {
    instance.separations().iter().filter(|&(_, _, s)| s > 0).map(|(a, b, s)| ConflictPair { a, b, s }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The whole tree was explored.
    Optimal,
    /// Budget ran out; the schedule is the best found.
    FeasibleIncumbent,
    /// The whole tree was explored without finding a schedule.
    Infeasible,
    /// Budget ran out before any schedule was found.
    BudgetExhausted,
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Upper bound on every completion time, on top of the hard deadlines.
    pub horizon: Option<Tick>,
    /// Schedule whose crossing order seeds the incumbent.
    pub warm_start: Option<Schedule>,
    /// Record every node in [`SolveResult::trace`].
    pub record_trace: bool,
    /// Explore every subtree regardless of the bound. For checking bounds.
    pub exhaustive: bool,
}

/// One explored node. `parent` indexes the trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceNode {
    pub parent: Option<usize>,
    pub bound: f64,
    /// Objective of the schedule found here, if every pair is satisfied.
    pub leaf_objective: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub schedule: Option<Schedule>,
    pub objective: Option<f64>,
    pub nodes: u64,
    /// Certificate when the instance is infeasible even without separations.
    pub witness: Option<Vec<Constraint>>,
    pub trace: Vec<TraceNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("exact solving supports tardy_count and weighted_tardy_count, not {0}")]
    UnsupportedObjective(ObjectiveKind),
    #[error("no finite horizon: some vehicle has neither a hard deadline nor a bounded walk; supply a horizon")]
    NoHorizon,
    #[error("the search budget ran out before the makespan was settled")]
    BudgetExhausted,
}

enum Goal {
    /// Minimize the weighted number of tardy vehicles.
    Tardiness,
    /// Stop at the first schedule.
    AnySchedule,
}

struct Search<'a> {
    instance: &'a Instance,
    map: VarMap,
    pairs: Vec<ConflictPair>,
    goal: Goal,
    options: &'a SolveOptions,
    started: Instant,
    nodes: u64,
    out_of_budget: bool,
    best: Option<(f64, Vec<Tick>)>,
    trace: Vec<TraceNode>,
}

struct Frame {
    /// Orientation not tried yet: `(x, y)` meaning `t_x - t_y >= s`.
    alternative: Option<(usize, usize, Tick)>,
    mark: crate::dcs::Mark,
    trace_id: usize,
}

impl<'a> Search<'a> {
    fn objective_of(&self, times: &[Tick]) -> f64 {
        match self.goal {
            Goal::AnySchedule => 0.0,
            Goal::Tardiness => (0..self.instance.vehicle_count())
                .filter(|&j| self.instance.d_soft(j).is_some_and(|d| times[self.map.last(j)] > d))
                .map(|j| self.instance.weight(j))
                .sum(),
        }
    }

    fn budget_left(&mut self) -> bool {
        if self.options.node_limit.is_some_and(|limit| self.nodes >= limit) {
            self.out_of_budget = true;
        }
        if self.nodes % 64 == 0 && self.options.time_limit.is_some_and(|limit| self.started.elapsed() >= limit) {
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    /// Earliest violated pair and the orientation to try first.
    fn branching_pair(&self, times: &[Tick]) -> Option<((usize, usize), (usize, usize), Tick)> {
        let mut chosen: Option<(Tick, (usize, usize), (usize, usize), Tick)> = None;
        for p in &self.pairs {
            let (va, vb) = (self.map.var(p.a), self.map.var(p.b));
            let (ta, tb) = (times[va], times[vb]);
            if (ta - tb).abs() >= p.s {
                continue;
            }
            let earliest = ta.min(tb);
            if chosen.as_ref().is_none_or(|c| earliest < c.0) {
                // the vehicle already ahead keeps the right of way first
                let (first, second) = if tb < ta { (vb, va) } else { (va, vb) };
                chosen = Some((earliest, (second, first), (first, second), p.s));
            }
        }
        chosen.map(|(_, primary, alternative, s)| (primary, alternative, s))
    }

    fn run(&mut self, mut prop: Propagator) {
        let mut stack: Vec<Frame> = Vec::new();
        let mut parent: Option<usize> = None;
        'node: loop {
            self.nodes += 1;
            let times = prop.times();
            let bound = self.objective_of(times);
            let branch = self.branching_pair(times);
            let trace_id = self.trace.len();
            if self.options.record_trace {
                let leaf_objective = branch.is_none().then_some(bound);
                self.trace.push(TraceNode { parent, bound, leaf_objective });
            }
            let prune = !self.options.exhaustive && self.best.as_ref().is_some_and(|(best, _)| bound >= *best);
            match branch {
                None => {
                    if self.best.as_ref().is_none_or(|(best, _)| bound < *best) {
                        self.best = Some((bound, times.to_vec()));
                    }
                    if matches!(self.goal, Goal::AnySchedule) {
                        return;
                    }
                }
                Some(((x1, y1), (x2, y2), s)) if !prune && self.budget_left() => {
                    let mark = prop.mark();
                    let opened = if prop.add(x1, y1, s) {
                        Some(Some((x2, y2, s)))
                    } else if prop.add(x2, y2, s) {
                        Some(None)
                    } else {
                        None
                    };
                    if let Some(alternative) = opened {
                        stack.push(Frame { alternative, mark, trace_id });
                        parent = Some(trace_id);
                        continue 'node;
                    }
                }
                Some(_) => {}
            }
            // backtrack
            while let Some(frame) = stack.last_mut() {
                prop.undo(frame.mark);
                if let Some((x, y, s)) = frame.alternative.take() {
                    if self.budget_left() && prop.add(x, y, s) {
                        parent = Some(frame.trace_id);
                        continue 'node;
                    }
                }
                stack.pop();
            }
            return;
        }
    }
}

fn check_objective(instance: &Instance) -> Result<(), ExactError> {
    match instance.objective() {
        ObjectiveKind::TardyCount | ObjectiveKind::WeightedTardyCount => Ok(()),
        other => Err(ExactError::UnsupportedObjective(other)),
    }
}

fn search(instance: &Instance, options: &SolveOptions, goal: Goal) -> SolveResult {
    let (system, map) = base_system(instance, options.horizon);
    let prop = match Propagator::new(&system) {
        Ok(prop) => prop,
        Err(err) => {
            let witness = match err {
                MinimalTimesError::PositiveCycle { cycle } => Some(cycle),
                MinimalTimesError::Unbounded { .. } => unreachable!("every stamp is bounded by its request time"),
            };
            return SolveResult {
                status: SolveStatus::Infeasible,
                schedule: None,
                objective: None,
                nodes: 0,
                witness,
                trace: Vec::new(),
            };
        }
    };
    let mut state = Search {
        instance,
        map,
        pairs: conflict_pairs(instance),
        goal,
        options,
        started: Instant::now(),
        nodes: 0,
        out_of_budget: false,
        best: None,
        trace: Vec::new(),
    };
    if let Some(warm) = &options.warm_start {
        if let Some(times) = canonical_times(&state, &system, warm) {
            state.best = Some((state.objective_of(&times), times));
        }
    }
    state.run(prop);

    let found = state.best.is_some();
    let status = match (state.out_of_budget, found) {
        (false, true) => SolveStatus::Optimal,
        (false, false) => SolveStatus::Infeasible,
        (true, true) => SolveStatus::FeasibleIncumbent,
        (true, false) => SolveStatus::BudgetExhausted,
    };
    let (objective, schedule) = match state.best {
        Some((value, times)) => (Some(value), Some(state.map.schedule(&times))),
        None => (None, None),
    };
    SolveResult { status, schedule, objective, nodes: state.nodes, witness: None, trace: state.trace }
}

/// Minimal times for the crossing order of `schedule`, if that order is
/// feasible.
fn canonical_times(state: &Search<'_>, system: &crate::dcs::DifferenceConstraints, schedule: &Schedule) -> Option<Vec<Tick>> {
    if schedule.check_shape(state.instance).is_err() {
        return None;
    }
    let mut system = system.clone();
    for p in &state.pairs {
        let (va, vb) = (state.map.var(p.a), state.map.var(p.b));
        if schedule.at(p.b) < schedule.at(p.a) {
            system.add(va, vb, p.s);
        } else {
            system.add(vb, va, p.s);
        }
    }
    minimal_times(&system).ok()
}

/// Minimum weighted number of tardy vehicles.
///
/// The returned schedule is the componentwise-minimal one for the best
/// crossing order found. Among equally good orders the first one found is
/// kept, so results are deterministic.
pub fn solve_exact(instance: &Instance, options: &SolveOptions) -> Result<SolveResult, ExactError> {
    check_objective(instance)?;
    Ok(search(instance, options, Goal::Tardiness))
}

/// Any feasible schedule, or a proof that none exists within the budget.
pub fn find_feasible(instance: &Instance, options: &SolveOptions) -> SolveResult {
    search(instance, options, Goal::AnySchedule)
}

#[derive(Debug, Clone)]
pub struct MakespanResult {
    /// `None` if the instance is infeasible.
    pub makespan: Option<Tick>,
    pub schedule: Option<Schedule>,
    pub nodes: u64,
}

/// Minimum makespan by binary search on a common completion cap, each probe
/// a feasibility search. The budget applies to every probe separately.
pub fn minimize_makespan(instance: &Instance, options: &SolveOptions) -> Result<MakespanResult, ExactError> {
    let makespan_of = |s: &Schedule| (0..s.times().len()).map(|j| s.completion(j)).max().unwrap_or(0);
    let probe = |horizon: Option<Tick>| {
        let opts = SolveOptions { horizon, warm_start: None, record_trace: false, exhaustive: false, ..options.clone() };
        find_feasible(instance, &opts)
    };
    let first = probe(options.horizon);
    let mut nodes = first.nodes;
    let Some(mut best) = first.schedule else {
        return match first.status {
            SolveStatus::Infeasible => Ok(MakespanResult { makespan: None, schedule: None, nodes }),
            _ => Err(ExactError::BudgetExhausted),
        };
    };
    let (system, map) = base_system(instance, None);
    let relaxed = minimal_times(&system).expect("feasible with separations implies feasible without");
    let mut lo = (0..instance.vehicle_count()).map(|j| relaxed[map.last(j)]).max().unwrap_or(0);
    let mut hi = makespan_of(&best);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let result = probe(Some(mid));
        nodes += result.nodes;
        match (result.status, result.schedule) {
            (_, Some(schedule)) => {
                hi = makespan_of(&schedule);
                best = schedule;
            }
            (SolveStatus::Infeasible, None) => lo = mid + 1,
            _ => return Err(ExactError::BudgetExhausted),
        }
    }
    Ok(MakespanResult { makespan: Some(hi), schedule: Some(best), nodes })
}
