//! Reference implementations used by the test suites. Everything here is
//! deliberately naive and shares no code with the solvers it checks.

use std::collections::{HashMap, VecDeque};

use rand::Rng;
use vsp_core::{Instance, InstanceParts, Tick, Visit, Walk};
use vsp_instances::{distances_to, generate_grid_instance, shortest_path, ExperimentConfig, GridSpec, JspInstance};

/// `t[x] - t[y] >= c`.
pub type Diff = (usize, usize, Tick);

/// Variables and constraints of `instance` with separations left out.
/// Variable 0 is the origin; visit `(j, i)` is `index[&(j, i)]`.
pub struct Encoding {
    pub var_count: usize,
    pub index: HashMap<(usize, usize), usize>,
    pub constraints: Vec<Diff>,
}

pub fn encode(instance: &Instance) -> Encoding {
    let mut index = HashMap::new();
    for (j, w) in instance.walks().iter().enumerate() {
        for i in 0..w.len() {
            let next = index.len() + 1;
            index.insert((j, i), next);
        }
    }
    let mut constraints = Vec::new();
    for (j, w) in instance.walks().iter().enumerate() {
        constraints.push((index[&(j, 0)], 0, instance.rho(j)));
        for i in 0..w.len() - 1 {
            let (a, b) = (index[&(j, i)], index[&(j, i + 1)]);
            constraints.push((b, a, w.tau_min[i]));
            if let Some(m) = w.tau_max[i] {
                constraints.push((a, b, -m));
            }
        }
        if let Some(d) = instance.d_hard(j) {
            constraints.push((0, index[&(j, w.len() - 1)], -d));
        }
    }
    Encoding { var_count: index.len() + 1, index, constraints }
}

/// Least solution with `t[0] = 0` by repeated relaxation, `None` if
/// infeasible. Unconstrained variables stay at 0.
pub fn naive_minimal(var_count: usize, constraints: &[Diff]) -> Option<Vec<Tick>> {
    let mut t: Vec<Option<Tick>> = vec![None; var_count];
    t[0] = Some(0);
    for _ in 0..=var_count + 1 {
        let mut changed = false;
        for &(x, y, c) in constraints {
            if let Some(ty) = t[y] {
                if t[x].is_none_or(|tx| tx < ty + c) {
                    t[x] = Some(ty + c);
                    changed = true;
                }
            }
        }
        if !changed {
            return (t[0] == Some(0)).then(|| t.into_iter().map(|v| v.unwrap_or(0)).collect());
        }
    }
    None
}

/// Least assignment that is at least `start` everywhere and satisfies the
/// constraints with `t[0] = 0`, if one exists.
pub fn push_up(mut t: Vec<Tick>, constraints: &[Diff]) -> Option<Vec<Tick>> {
    t[0] = 0;
    for _ in 0..=t.len() + 1 {
        let mut changed = false;
        for &(x, y, c) in constraints {
            if t[x] < t[y] + c {
                if x == 0 {
                    return None;
                }
                t[x] = t[y] + c;
                changed = true;
            }
        }
        if !changed {
            return Some(t);
        }
    }
    None
}

/// Shared-vertex pairs with positive separation, read straight from the
/// instance.
pub fn positive_pairs(instance: &Instance) -> Vec<(Visit, Visit, Tick)> {
    let mut pairs = Vec::new();
    for (j1, w1) in instance.walks().iter().enumerate() {
        for (j2, w2) in instance.walks().iter().enumerate().skip(j1 + 1) {
            for i1 in 0..w1.len() {
                for i2 in 0..w2.len() {
                    let (a, b) = (Visit::new(j1, i1), Visit::new(j2, i2));
                    if let Some(s) = instance.separation(a, b).filter(|&s| s > 0) {
                        pairs.push((a, b, s));
                    }
                }
            }
        }
    }
    pairs
}

fn weighted_tardy(instance: &Instance, enc: &Encoding, t: &[Tick]) -> f64 {
    (0..instance.vehicle_count())
        .filter(|&j| {
            let last = enc.index[&(j, instance.walk(j).len() - 1)];
            instance.d_soft(j).is_some_and(|d| t[last] > d)
        })
        .map(|j| instance.weight(j))
        .sum()
}

/// Minimum weighted tardy count over every crossing order of every pair,
/// `None` if no order is feasible.
pub fn brute_force_tardy(instance: &Instance) -> Option<f64> {
    let enc = encode(instance);
    let pairs = positive_pairs(instance);
    assert!(pairs.len() <= 20, "too many pairs to enumerate");
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << pairs.len()) {
        let mut constraints = enc.constraints.clone();
        for (k, &(a, b, s)) in pairs.iter().enumerate() {
            let (va, vb) = (enc.index[&(a.vehicle, a.step)], enc.index[&(b.vehicle, b.step)]);
            if mask >> k & 1 == 1 {
                constraints.push((va, vb, s));
            } else {
                constraints.push((vb, va, s));
            }
        }
        if let Some(t) = naive_minimal(enc.var_count, &constraints) {
            let value = weighted_tardy(instance, &enc, &t);
            if best.is_none_or(|b| value < b) {
                best = Some(value);
            }
        }
    }
    best
}

/// Optimal makespan, measured as the latest start of a final operation, of a
/// unit-time job shop with zero release dates, waiting allowed and no
/// deadlines. Breadth-first search over how many operations each job has
/// started; in one tick any set of jobs on pairwise distinct machines may
/// start their next operation.
pub fn brute_force_jsp_makespan(jsp: &JspInstance) -> Tick {
    assert!(!jsp.theta && jsp.r.iter().all(|&r| r == 0) && jsp.delta.iter().all(Option::is_none));
    let n = jsp.jobs.len();
    let done: Vec<usize> = jsp.jobs.iter().map(Vec::len).collect();
    let start = vec![0usize; n];
    let mut dist: HashMap<Vec<usize>, Tick> = HashMap::from([(start.clone(), 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        let d = dist[&state];
        if state == done {
            // the last tick started the final operations
            return d - 1;
        }
        let movable: Vec<usize> = (0..n).filter(|&j| state[j] < done[j]).collect();
        for subset in 1u32..(1 << movable.len()) {
            let chosen: Vec<usize> = (0..movable.len()).filter(|k| subset >> k & 1 == 1).map(|k| movable[k]).collect();
            let mut machines: Vec<usize> = chosen.iter().map(|&j| jsp.jobs[j][state[j]]).collect();
            machines.sort_unstable();
            if machines.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut next = state.clone();
            for &j in &chosen {
                next[j] += 1;
            }
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    unreachable!("every job can always advance alone")
}

/// Random unit job shop on `machines` machines without consecutive repeats.
pub fn random_jsp(rng: &mut impl Rng, machines: usize, max_jobs: usize, max_ops: usize) -> JspInstance {
    let jobs = (0..rng.random_range(1..=max_jobs))
        .map(|_| {
            let mut ops: Vec<usize> = vec![rng.random_range(0..machines)];
            for _ in 1..rng.random_range(1..=max_ops) {
                let prev = *ops.last().expect("non-empty");
                let m = (prev + rng.random_range(1..machines)) % machines;
                ops.push(m);
            }
            ops
        })
        .collect();
    JspInstance::new(machines, jobs)
}

/// Random instance on a 3x3 grid with up to `max_vehicles` vehicles, random
/// request times, link windows, separations (some zero) and deadlines.
pub fn random_small_instance(rng: &mut impl Rng, max_vehicles: usize) -> Instance {
    let grid = GridSpec::new(3, 3);
    let graph = grid.graph().expect("grid is valid");
    let n = rng.random_range(1..=max_vehicles);
    let walks: Vec<Walk> = (0..n)
        .map(|_| {
            let s = rng.random_range(0..9);
            let t = (s + rng.random_range(1..9)) % 9;
            let path = shortest_path(&graph, s, t, &distances_to(&graph, t)).expect("grid is connected");
            let links = path.len() - 1;
            let tau_min: Vec<Tick> = (0..links).map(|_| rng.random_range(0..=60)).collect();
            let tau_max = tau_min
                .iter()
                .map(|&m| rng.random_bool(0.3).then(|| m + rng.random_range(0..=15)))
                .collect();
            Walk { vertices: path, tau_min, tau_max }
        })
        .collect();
    let mut parts = InstanceParts::new(graph, walks).with_uniform_separation(0);
    for sep in &mut parts.separations {
        sep.2 = if rng.random_bool(0.15) { 0 } else { rng.random_range(1..=12) };
    }
    parts.rho = (0..n).map(|_| rng.random_range(0..=30)).collect();
    let free: Vec<Tick> = parts.walks.iter().map(|w| w.tau_min.iter().sum()).collect();
    parts.d_soft = (0..n).map(|j| Some(parts.rho[j] + free[j] + rng.random_range(0..=20))).collect();
    parts.d_hard = (0..n)
        .map(|j| rng.random_bool(0.4).then(|| parts.d_soft[j].expect("finite") + rng.random_range(0..=40)))
        .collect();
    Instance::new(parts).expect("construction respects every invariant")
}


/// Ten small congested grid instances with between 4 and 6 vehicles, named
/// after their LP golden files.
pub fn golden_corpus() -> Vec<(String, Instance)> {
    (0..10u64)
        .map(|k| {
            let n = 6 - (k as usize % 3);
            let mut cfg = ExperimentConfig::standard(n);
            cfg.grid = if k % 2 == 0 { GridSpec::new(3, 3) } else { GridSpec::new(2, 4) };
            let ratio = 1.0 + 0.01 * k as f64;
            (format!("grid_{k:02}_n{n}.lp"), generate_grid_instance(&cfg, ratio, 1000 + k).unwrap())
        })
        .collect()
}
