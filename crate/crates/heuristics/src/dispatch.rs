//! Event-driven dispatch loop.
//!
//! Vehicles are first given stamps at their first vertex in key order. Then
//! the earliest pending stamp `t` is popped repeatedly; every unfinished
//! vehicle whose current stamp is `t` is grouped with the others heading to
//! the same next vertex, each group is ordered by [`sorting_key`], and each
//! vehicle in turn receives the earliest separation-feasible stamp at that
//! vertex within its travel time window.

use std::collections::{BTreeSet, HashMap};

use vsp_core::{Instance, Schedule, Tick, Visit};

use crate::key::{initial_key, sorting_key, Mode, NegativeSlack, VehicleState};
use crate::slot::earliest_feasible_slot;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DispatchConfig {
    pub negative_slack: NegativeSlack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VehicleStatus {
    Completed,
    /// Walk finished after the hard deadline. Not repaired.
    HardDeadlineViolated,
    /// No feasible stamp within the travel window for `step`; the vehicle
    /// stopped at `step - 1`.
    SlotWindowFailed { step: usize },
}

/// Stamps and statuses produced by one dispatch run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispatchOutcome {
    pub mode: Mode,
    pub stamps: Vec<Vec<Option<Tick>>>,
    pub status: Vec<VehicleStatus>,
}

impl DispatchOutcome {
    /// The full schedule, unless some vehicle failed to find a slot.
    pub fn schedule(&self) -> Option<Schedule> {
        self.stamps
            .iter()
            .map(|row| row.iter().copied().collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .map(Schedule::new)
    }

    pub fn slot_failures(&self) -> usize {
        self.status.iter().filter(|s| matches!(s, VehicleStatus::SlotWindowFailed { .. })).count()
    }

    pub fn hard_deadline_violations(&self) -> usize {
        self.status.iter().filter(|s| **s == VehicleStatus::HardDeadlineViolated).count()
    }
}

/// Bookkeeping for the dispatch loop.
///
/// * `pending`: distinct stamps still to be processed, increasing.
/// * `by_stamp`: stamp -> unfinished vehicles whose current vertex carries it.
/// * `by_stamp_next`: (stamp, next vertex) -> those vehicles, grouped.
/// * `by_vertex`: vertex -> every stamp assigned there, ordered.
#[derive(Debug, Default)]
pub struct EventQueue {
    pending: BTreeSet<Tick>,
    by_stamp: HashMap<Tick, Vec<usize>>,
    by_stamp_next: HashMap<(Tick, usize), Vec<usize>>,
    by_vertex: Vec<BTreeSet<(Tick, Visit)>>,
}

impl EventQueue {
    pub fn new(vertex_count: usize) -> Self {
        Self { by_vertex: vec![BTreeSet::new(); vertex_count], ..Self::default() }
    }

    /// Records `stamp` for `visit` at `vertex`. `next` is the vertex the
    /// vehicle heads to afterwards, if any.
    pub fn assign(&mut self, visit: Visit, vertex: usize, stamp: Tick, next: Option<usize>) {
        self.by_vertex[vertex].insert((stamp, visit));
        if let Some(next) = next {
            self.pending.insert(stamp);
            self.by_stamp.entry(stamp).or_default().push(visit.vehicle);
            self.by_stamp_next.entry((stamp, next)).or_default().push(visit.vehicle);
        }
    }

    pub fn earliest(&self) -> Option<Tick> {
        self.pending.first().copied()
    }

    pub fn remove(&mut self, stamp: Tick) {
        self.pending.remove(&stamp);
    }

    fn take_at(&mut self, stamp: Tick) -> Vec<usize> {
        self.by_stamp.remove(&stamp).unwrap_or_default()
    }

    fn take_group(&mut self, stamp: Tick, next: usize) -> Vec<usize> {
        self.by_stamp_next.remove(&(stamp, next)).unwrap_or_default()
    }

    /// Stamps at `vertex` no earlier than `from`.
    pub fn stamps_at(&self, vertex: usize, from: Tick) -> impl Iterator<Item = (Tick, Visit)> + '_ {
        self.by_vertex[vertex].range((from, Visit::new(0, 0))..).copied()
    }
}

fn blockers<'a>(
    instance: &'a Instance,
    queue: &'a EventQueue,
    vertex: usize,
    requester: Visit,
    lower: Tick,
) -> impl Iterator<Item = (Tick, Tick)> + 'a {
    let reach = instance.separations().max_gap();
    queue
        .stamps_at(vertex, lower.saturating_sub(reach))
        .filter(move |(_, v)| v.vehicle != requester.vehicle)
        .filter_map(move |(stamp, v)| instance.separation(requester, v).map(|gap| (stamp, gap)))
}

pub fn run_dispatch(instance: &Instance, mode: Mode) -> DispatchOutcome {
    run_dispatch_with(instance, mode, &DispatchConfig::default())
}

pub fn run_dispatch_with(instance: &Instance, mode: Mode, config: &DispatchConfig) -> DispatchOutcome {
    let n = instance.vehicle_count();
    let policy = config.negative_slack;
    let mut stamps: Vec<Vec<Option<Tick>>> = instance.walks().iter().map(|w| vec![None; w.len()]).collect();
    let mut status = vec![VehicleStatus::Completed; n];
    let mut queue = EventQueue::new(instance.graph().vertex_count());
    // index of the last stamped vertex of each vehicle
    let mut position = vec![0usize; n];

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| initial_key(instance, j, mode, policy));
    for j in order {
        let walk = instance.walk(j);
        let visit = Visit::new(j, 0);
        let lower = instance.rho(j);
        let stamp = earliest_feasible_slot(lower, None, blockers(instance, &queue, walk.first(), visit, lower))
            .expect("unbounded window always has a slot");
        stamps[j][0] = Some(stamp);
        queue.assign(visit, walk.first(), stamp, walk.vertices.get(1).copied());
    }

    while let Some(t) = queue.earliest() {
        // A zero minimum link time can put a vehicle back at the stamp being
        // processed, so drain until nothing is left at `t`.
        loop {
            let mut current = queue.take_at(t);
            if current.is_empty() {
                break;
            }
            current.sort_unstable();
            let next_vertices: Vec<usize> =
                current.iter().map(|&v| instance.walk(v).vertices[position[v] + 1]).collect();
            for next_vertex in next_vertices {
                // empty once the group has been handled
                let mut group = queue.take_group(t, next_vertex);
                group.sort_by_key(|&u| {
                    sorting_key(instance, VehicleState { vehicle: u, step: position[u], stamp: t }, mode, policy)
                });
                for u in group {
                    let walk = instance.walk(u);
                    let step = position[u] + 1;
                    let visit = Visit::new(u, step);
                    let lower = t + walk.tau_min[step - 1];
                    let upper = walk.tau_max[step - 1].map(|m| t + m);
                    match earliest_feasible_slot(lower, upper, blockers(instance, &queue, next_vertex, visit, lower)) {
                        Ok(stamp) => {
                            stamps[u][step] = Some(stamp);
                            position[u] = step;
                            queue.assign(visit, next_vertex, stamp, walk.vertices.get(step + 1).copied());
                        }
                        Err(_) => status[u] = VehicleStatus::SlotWindowFailed { step },
                    }
                }
            }
        }
        queue.remove(t);
    }

    for j in 0..n {
        if status[j] != VehicleStatus::Completed {
            continue;
        }
        let completion = stamps[j].last().copied().flatten().expect("completed vehicle has all stamps");
        if instance.d_hard(j).is_some_and(|d| completion > d) {
            status[j] = VehicleStatus::HardDeadlineViolated;
        }
    }

    DispatchOutcome { mode, stamps, status }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsp_core::{Graph, InstanceParts, Walk};

    fn two_into_one(d_soft: [Option<Tick>; 2]) -> Instance {
        // A=0, B=1, C=2; walks (A, C) and (B, C)
        let g = Graph::new(3, [(0, 2), (1, 2)]).unwrap();
        let mut parts =
            InstanceParts::new(g, vec![Walk::uniform(vec![0, 2], 50, None), Walk::uniform(vec![1, 2], 50, None)])
                .with_uniform_separation(5);
        parts.d_soft = d_soft.to_vec();
        Instance::new(parts).unwrap()
    }

    fn times(outcome: &DispatchOutcome) -> Vec<Vec<Tick>> {
        outcome.schedule().unwrap().into_times()
    }

    #[test]
    fn lone_vehicle_runs_at_minimum_times() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(InstanceParts::new(g, vec![Walk::uniform(vec![0, 1, 2], 50, None)])).unwrap();
        for mode in Mode::ALL {
            assert_eq!(times(&run_dispatch(&inst, mode)), vec![vec![0, 50, 100]]);
        }
    }

    #[test]
    fn proximity_breaks_ties_by_id() {
        let out = run_dispatch(&two_into_one([None, None]), Mode::Proximity);
        assert_eq!(times(&out), vec![vec![0, 50], vec![0, 55]]);
    }

    #[test]
    fn absolute_slack_reorders() {
        // slacks 150 and 10
        let out = run_dispatch(&two_into_one([Some(200), Some(60)]), Mode::AbsDeadlineProximity);
        assert_eq!(times(&out), vec![vec![0, 55], vec![0, 50]]);
    }

    #[test]
    fn shared_start_vertex_is_staggered() {
        let g = Graph::new(3, [(0, 1), (0, 2)]).unwrap();
        let parts =
            InstanceParts::new(g, vec![Walk::uniform(vec![0, 1], 50, None), Walk::uniform(vec![0, 2], 50, None)])
                .with_uniform_separation(5);
        let out = run_dispatch(&Instance::new(parts).unwrap(), Mode::Proximity);
        assert_eq!(times(&out), vec![vec![0, 50], vec![5, 55]]);
    }

    #[test]
    fn zero_link_time_is_drained() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(InstanceParts::new(g, vec![Walk::uniform(vec![0, 1, 2], 0, None)])).unwrap();
        assert_eq!(times(&run_dispatch(&inst, Mode::Proximity)), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn slot_window_failure_is_reported() {
        let g = Graph::new(3, [(0, 2), (1, 2)]).unwrap();
        let parts = InstanceParts::new(
            g,
            vec![Walk::uniform(vec![0, 2], 50, Some(50)), Walk::uniform(vec![1, 2], 50, Some(52))],
        )
        .with_uniform_separation(5);
        let out = run_dispatch(&Instance::new(parts).unwrap(), Mode::Proximity);
        assert_eq!(out.status, vec![VehicleStatus::Completed, VehicleStatus::SlotWindowFailed { step: 1 }]);
        assert_eq!(out.stamps[1], vec![Some(0), None]);
        assert!(out.schedule().is_none());
    }

    #[test]
    fn hard_deadline_reported_not_repaired() {
        let g = Graph::new(3, [(0, 2), (1, 2)]).unwrap();
        let mut parts =
            InstanceParts::new(g, vec![Walk::uniform(vec![0, 2], 50, None), Walk::uniform(vec![1, 2], 50, None)])
                .with_uniform_separation(5);
        parts.d_hard = vec![None, Some(52)];
        let out = run_dispatch(&Instance::new(parts).unwrap(), Mode::Proximity);
        assert_eq!(out.status[1], VehicleStatus::HardDeadlineViolated);
        assert_eq!(times(&out)[1], vec![0, 55]);
    }
}
