//! Difference constraints `t_x - t_y >= c` and their componentwise-minimal
//! solution.
//!
//! Variable 0 is an origin fixed at 0; lower bounds are constraints against
//! it and upper bounds are constraints with it on the left. The minimal
//! solution is the longest-path distance from the origin in the graph with an
//! edge `y -> x` of weight `c` per constraint; it exists iff that graph has no
//! positive cycle.

use thiserror::Error;
use vsp_core::{Instance, Schedule, Tick, Visit};

pub const ORIGIN: usize = 0;

/// `t_x - t_y >= c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub x: usize,
    pub y: usize,
    pub c: Tick,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DifferenceConstraints {
    var_count: usize,
    constraints: Vec<Constraint>,
}

impl DifferenceConstraints {
    /// A system over `var_count` variables, the origin included.
    pub fn new(var_count: usize) -> Self {
        Self { var_count: var_count.max(1), constraints: Vec::new() }
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add(&mut self, x: usize, y: usize, c: Tick) {
        assert!(x < self.var_count && y < self.var_count, "variable out of range");
        self.constraints.push(Constraint { x, y, c });
    }

    /// `t_x >= c`.
    pub fn at_least(&mut self, x: usize, c: Tick) {
        self.add(x, ORIGIN, c);
    }

    /// `t_x <= c`.
    pub fn at_most(&mut self, x: usize, c: Tick) {
        self.add(ORIGIN, x, -c);
    }

    pub fn is_satisfied_by(&self, times: &[Tick]) -> bool {
        times.len() == self.var_count
            && times[ORIGIN] == 0
            && self.constraints.iter().all(|k| times[k.x] - times[k.y] >= k.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimalTimesError {
    /// The constraints on this cycle sum to a positive bound on `0`.
    #[error("infeasible: a cycle of {} constraints has positive total", cycle.len())]
    PositiveCycle { cycle: Vec<Constraint> },
    #[error("variable {var} has no lower bound derived from the origin")]
    Unbounded { var: usize },
}

/// Componentwise-minimal solution, or a positive-cycle witness.
pub fn minimal_times(system: &DifferenceConstraints) -> Result<Vec<Tick>, MinimalTimesError> {
    let n = system.var_count;
    let mut dist: Vec<Option<Tick>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[ORIGIN] = Some(0);
    let mut last_relaxed = None;
    for _ in 0..n {
        last_relaxed = None;
        for (k, con) in system.constraints.iter().enumerate() {
            if let Some(dy) = dist[con.y] {
                let candidate = dy + con.c;
                if dist[con.x].is_none_or(|dx| candidate > dx) {
                    dist[con.x] = Some(candidate);
                    pred[con.x] = Some(k);
                    last_relaxed = Some(con.x);
                }
            }
        }
        if last_relaxed.is_none() {
            break;
        }
    }
    if let Some(mut v) = last_relaxed {
        // n steps back along predecessors lands on the cycle
        for _ in 0..n {
            v = system.constraints[pred[v].expect("relaxed vertex has a predecessor")].y;
        }
        let start = v;
        let mut cycle = Vec::new();
        loop {
            let k = pred[v].expect("cycle vertex has a predecessor");
            cycle.push(system.constraints[k]);
            v = system.constraints[k].y;
            if v == start {
                break;
            }
        }
        cycle.reverse();
        return Err(MinimalTimesError::PositiveCycle { cycle });
    }
    if dist[ORIGIN] != Some(0) {
        unreachable!("origin raised without a positive cycle");
    }
    dist.into_iter()
        .enumerate()
        .map(|(var, d)| d.ok_or(MinimalTimesError::Unbounded { var }))
        .collect()
}

/// Variable index of every visit: the origin is 0, then walks in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarMap {
    offsets: Vec<usize>,
}

impl VarMap {
    pub fn new(instance: &Instance) -> Self {
        let mut offsets = Vec::with_capacity(instance.vehicle_count() + 1);
        let mut next = 1;
        for walk in instance.walks() {
            offsets.push(next);
            next += walk.len();
        }
        offsets.push(next);
        Self { offsets }
    }

    pub fn var_count(&self) -> usize {
        *self.offsets.last().expect("at least the end offset")
    }

    pub fn var(&self, visit: Visit) -> usize {
        self.offsets[visit.vehicle] + visit.step
    }

    pub fn last(&self, vehicle: usize) -> usize {
        self.offsets[vehicle + 1] - 1
    }

    pub fn schedule(&self, times: &[Tick]) -> Schedule {
        Schedule::new(self.offsets.windows(2).map(|w| times[w[0]..w[1]].to_vec()).collect())
    }

    pub fn times(&self, schedule: &Schedule) -> Vec<Tick> {
        std::iter::once(0).chain(schedule.times().iter().flatten().copied()).collect()
    }
}

/// Request times, minimum and maximum link times and hard deadlines, the
/// latter capped at `horizon` if given. Separations are left out.
pub fn base_system(instance: &Instance, horizon: Option<Tick>) -> (DifferenceConstraints, VarMap) {
    let map = VarMap::new(instance);
    let mut system = DifferenceConstraints::new(map.var_count());
    for (j, walk) in instance.walks().iter().enumerate() {
        system.at_least(map.var(Visit::new(j, 0)), instance.rho(j));
        for i in 0..walk.link_count() {
            let (a, b) = (map.var(Visit::new(j, i)), map.var(Visit::new(j, i + 1)));
            system.add(b, a, walk.tau_min[i]);
            if let Some(max) = walk.tau_max[i] {
                system.add(a, b, -max);
            }
        }
        let cap = match (instance.d_hard(j), horizon) {
            (Some(d), Some(h)) => Some(d.min(h)),
            (d, h) => d.or(h),
        };
        if let Some(cap) = cap {
            system.at_most(map.last(j), cap);
        }
    }
    (system, map)
}

/// Incrementally maintained minimal solution with an undo trail.
///
/// Adding a constraint raises the affected times by label correcting from
/// its head. Since the system was consistent before, any positive cycle must
/// use the new edge `y -> x`, so the addition fails exactly when the
/// propagation would raise `y` or the origin.
#[derive(Debug, Clone)]
pub struct Propagator {
    dist: Vec<Tick>,
    out: Vec<Vec<(usize, Tick)>>,
    trail: Vec<(usize, Tick)>,
    edge_tails: Vec<usize>,
    queue: std::collections::VecDeque<usize>,
}

/// Position in a [`Propagator`]'s history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mark {
    trail: usize,
    edges: usize,
}

impl Propagator {
    pub fn new(system: &DifferenceConstraints) -> Result<Self, MinimalTimesError> {
        let dist = minimal_times(system)?;
        let mut out = vec![Vec::new(); system.var_count()];
        for k in system.constraints() {
            out[k.y].push((k.x, k.c));
        }
        Ok(Self { dist, out, trail: Vec::new(), edge_tails: Vec::new(), queue: Default::default() })
    }

    pub fn times(&self) -> &[Tick] {
        &self.dist
    }

    pub fn mark(&self) -> Mark {
        Mark { trail: self.trail.len(), edges: self.edge_tails.len() }
    }

    pub fn undo(&mut self, mark: Mark) {
        while self.trail.len() > mark.trail {
            let (v, old) = self.trail.pop().expect("non-empty trail");
            self.dist[v] = old;
        }
        while self.edge_tails.len() > mark.edges {
            let y = self.edge_tails.pop().expect("non-empty edge log");
            self.out[y].pop();
        }
    }

    fn raise(&mut self, v: usize, to: Tick) {
        self.trail.push((v, self.dist[v]));
        self.dist[v] = to;
        self.queue.push_back(v);
    }

    /// Adds `t_x - t_y >= c`. On infeasibility the state is left unchanged
    /// and `false` is returned.
    pub fn add(&mut self, x: usize, y: usize, c: Tick) -> bool {
        let mark = self.mark();
        self.out[y].push((x, c));
        self.edge_tails.push(y);
        let candidate = self.dist[y] + c;
        if candidate <= self.dist[x] {
            return true;
        }
        if x == y || x == ORIGIN {
            self.undo(mark);
            return false;
        }
        self.queue.clear();
        self.raise(x, candidate);
        while let Some(v) = self.queue.pop_front() {
            let dv = self.dist[v];
            for idx in 0..self.out[v].len() {
                let (w, c) = self.out[v][idx];
                if dv + c > self.dist[w] {
                    if w == y || w == ORIGIN {
                        self.queue.clear();
                        self.undo(mark);
                        return false;
                    }
                    self.raise(w, dv + c);
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vsp_core::{Graph, InstanceParts, Walk};

    fn two_into_one(d_hard: Option<Tick>) -> Instance {
        let g = Graph::new(3, [(0, 2), (1, 2)]).unwrap();
        let mut parts =
            InstanceParts::new(g, vec![Walk::uniform(vec![0, 2], 50, None), Walk::uniform(vec![1, 2], 50, None)])
                .with_uniform_separation(5);
        parts.d_hard = vec![None, d_hard];
        Instance::new(parts).unwrap()
    }

    #[test]
    fn chain_of_lower_bounds() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(InstanceParts::new(g, vec![Walk::uniform(vec![0, 1, 2], 50, None)])).unwrap();
        let (system, map) = base_system(&inst, None);
        let times = minimal_times(&system).unwrap();
        assert_eq!(map.schedule(&times).into_times(), vec![vec![0, 50, 100]]);
    }

    #[test]
    fn decided_pair_shifts_second_vehicle() {
        let inst = two_into_one(None);
        let (mut system, map) = base_system(&inst, None);
        system.add(map.var(Visit::new(1, 1)), map.var(Visit::new(0, 1)), 5);
        let times = minimal_times(&system).unwrap();
        assert_eq!(map.schedule(&times).into_times(), vec![vec![0, 50], vec![0, 55]]);
    }

    #[test]
    fn hard_deadline_makes_ordering_infeasible() {
        let inst = two_into_one(Some(52));
        let (mut system, map) = base_system(&inst, None);
        let sep = Constraint { x: map.var(Visit::new(1, 1)), y: map.var(Visit::new(0, 1)), c: 5 };
        system.add(sep.x, sep.y, sep.c);
        let Err(MinimalTimesError::PositiveCycle { cycle }) = minimal_times(&system) else {
            panic!("expected a positive cycle");
        };
        assert!(cycle.iter().map(|k| k.c).sum::<Tick>() > 0);
        assert!(cycle.contains(&sep));
        assert!(cycle.contains(&Constraint { x: ORIGIN, y: map.var(Visit::new(1, 1)), c: -52 }));
        for pair in cycle.windows(2) {
            assert_eq!(pair[0].x, pair[1].y);
        }
        assert_eq!(cycle.last().unwrap().x, cycle[0].y);
    }

    #[test]
    fn unbounded_variable_reported() {
        let mut system = DifferenceConstraints::new(3);
        system.at_least(1, 4);
        assert_eq!(minimal_times(&system), Err(MinimalTimesError::Unbounded { var: 2 }));
    }

    #[test]
    fn propagator_matches_batch_and_undoes() {
        let inst = two_into_one(Some(52));
        let (system, map) = base_system(&inst, None);
        let mut prop = Propagator::new(&system).unwrap();
        let before = prop.times().to_vec();
        let (a, b) = (map.var(Visit::new(0, 1)), map.var(Visit::new(1, 1)));
        assert!(!prop.add(b, a, 5));
        assert_eq!(prop.times(), &before[..]);
        let mark = prop.mark();
        assert!(prop.add(a, b, 5));
        assert_eq!(map.schedule(prop.times()).into_times(), vec![vec![0, 55], vec![0, 50]]);
        prop.undo(mark);
        assert_eq!(prop.times(), &before[..]);
    }
}
