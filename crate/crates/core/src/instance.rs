use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::objective::ObjectiveKind;
use crate::time::{Tick, TimeScale};

/// The `step`-th vertex (0-based) of vehicle `vehicle`'s walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Visit {
    pub vehicle: usize,
    pub step: usize,
}

impl Visit {
    pub const fn new(vehicle: usize, step: usize) -> Self {
        Self { vehicle, step }
    }
}

impl fmt::Display for Visit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vehicle, self.step)
    }
}

/// A vehicle's walk together with its per-link travel time window.
///
/// `tau_min[i]` and `tau_max[i]` bound the time between reaching
/// `vertices[i]` and `vertices[i + 1]`; `None` in `tau_max` is `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<usize>,
    pub tau_min: Vec<Tick>,
    pub tau_max: Vec<Option<Tick>>,
}

impl Walk {
    /// Walk with the same travel window on every link.
    pub fn uniform(vertices: Vec<usize>, tau_min: Tick, tau_max: Option<Tick>) -> Self {
        let links = vertices.len().saturating_sub(1);
        Self { vertices, tau_min: vec![tau_min; links], tau_max: vec![tau_max; links] }
    }

    /// Number of vertices, `q_j`.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn link_count(&self) -> usize {
        self.tau_min.len()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        self.vertices[self.vertices.len() - 1]
    }

    /// Sum of minimum link times from step `from` to the end of the walk.
    pub fn remaining_min_time(&self, from: usize) -> Tick {
        self.tau_min[from.min(self.tau_min.len())..].iter().sum()
    }
}

/// Separation gaps between visits of distinct vehicles to the same vertex.
///
/// Stored once per unordered pair; lookups are symmetric.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Separations {
    pairs: BTreeMap<(Visit, Visit), Tick>,
}

fn canonical(a: Visit, b: Visit) -> (Visit, Visit) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Separations {
    pub fn get(&self, a: Visit, b: Visit) -> Option<Tick> {
        self.pairs.get(&canonical(a, b)).copied()
    }

    /// Unordered pairs `(a, b, s)` with `a < b`, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (Visit, Visit, Tick)> + '_ {
        self.pairs.iter().map(|(&(a, b), &s)| (a, b, s))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn max_gap(&self) -> Tick {
        self.pairs.values().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("`{field}` has {found} entries, expected one per vehicle ({expected})")]
    LengthMismatch { field: &'static str, expected: usize, found: usize },
    #[error("vehicle {vehicle}: `{field}` has {found} entries, expected {expected} (one per link)")]
    WalkLengthMismatch { vehicle: usize, field: &'static str, expected: usize, found: usize },
    #[error("vehicle {vehicle}: walk is empty")]
    EmptyWalk { vehicle: usize },
    #[error("vehicle {vehicle}: step {step} references vertex {vertex} outside the graph")]
    VertexOutOfRange { vehicle: usize, step: usize, vertex: usize },
    #[error("vehicle {vehicle}: link {link} ({from} -> {to}) is not an edge of the graph")]
    MissingEdge { vehicle: usize, link: usize, from: usize, to: usize },
    #[error("vehicle {vehicle}: link {link} has negative minimum travel time")]
    NegativeTauMin { vehicle: usize, link: usize },
    #[error("vehicle {vehicle}: link {link} has tau_min > tau_max")]
    EmptyTravelWindow { vehicle: usize, link: usize },
    #[error("vehicle {vehicle}: deadlines must satisfy rho <= d_soft <= d_hard (and rho <= d_hard)")]
    DeadlineOrder { vehicle: usize },
    #[error("separation {a}-{b} references a visit outside the walks")]
    SeparationIndex { a: Visit, b: Visit },
    #[error("separation {a}-{b} relates a vehicle to itself; separations are defined only between distinct vehicles")]
    SeparationSameVehicle { a: Visit, b: Visit },
    #[error("separation {a}-{b} is defined only if both visits are at the same vertex (found {va} and {vb})")]
    SeparationVertexMismatch { a: Visit, b: Visit, va: usize, vb: usize },
    #[error("separation {a}-{b} is negative")]
    NegativeSeparation { a: Visit, b: Visit },
    #[error("separation {a}-{b} given twice with different values ({first} and {second})")]
    ConflictingSeparation { a: Visit, b: Visit, first: Tick, second: Tick },
    #[error("vehicle {vehicle}: weight must be positive and finite")]
    InvalidWeight { vehicle: usize },
    #[error("objective {0:?} requires vehicle weights")]
    MissingWeights(ObjectiveKind),
}

/// Raw, unvalidated instance data. Convert with [`Instance::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceParts {
    pub graph: Graph,
    pub walks: Vec<Walk>,
    pub rho: Vec<Tick>,
    /// `None` is `+∞`.
    pub d_soft: Vec<Option<Tick>>,
    /// `None` is `+∞`.
    pub d_hard: Vec<Option<Tick>>,
    /// `(a, b, s)`; either or both orientations of a pair may be listed.
    pub separations: Vec<(Visit, Visit, Tick)>,
    pub objective: ObjectiveKind,
    pub weights: Option<Vec<f64>>,
    pub time_scale: TimeScale,
}

impl InstanceParts {
    /// Parts with `rho = 0`, unbounded deadlines, no separations and the
    /// tardy-count objective.
    pub fn new(graph: Graph, walks: Vec<Walk>) -> Self {
        let n = walks.len();
        Self {
            graph,
            walks,
            rho: vec![0; n],
            d_soft: vec![None; n],
            d_hard: vec![None; n],
            separations: Vec::new(),
            objective: ObjectiveKind::TardyCount,
            weights: None,
            time_scale: TimeScale::default(),
        }
    }

    /// Adds separation `s` between every pair of visits of distinct vehicles
    /// at the same vertex.
    pub fn with_uniform_separation(mut self, s: Tick) -> Self {
        self.separations = shared_vertex_pairs(&self.walks).map(|(a, b)| (a, b, s)).collect();
        self
    }
}

/// Every unordered pair of visits by distinct vehicles to a common vertex.
pub(crate) fn shared_vertex_pairs(walks: &[Walk]) -> impl Iterator<Item = (Visit, Visit)> {
    let mut by_vertex: BTreeMap<usize, Vec<Visit>> = BTreeMap::new();
    for (j, walk) in walks.iter().enumerate() {
        for (i, &v) in walk.vertices.iter().enumerate() {
            by_vertex.entry(v).or_default().push(Visit::new(j, i));
        }
    }
    let mut out = Vec::new();
    for visits in by_vertex.values() {
        for (k, &a) in visits.iter().enumerate() {
            for &b in &visits[k + 1..] {
                if a.vehicle != b.vehicle {
                    out.push((a, b));
                }
            }
        }
    }
    out.sort();
    out.into_iter()
}

fn le_opt(a: Option<Tick>, b: Option<Tick>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    parts: InstanceParts,
    separations: Separations,
    visits_by_vertex: Vec<Vec<Visit>>,
}

impl Instance {
    pub fn new(parts: InstanceParts) -> Result<Self, InstanceError> {
        let n = parts.walks.len();
        for (field, found) in [("rho", parts.rho.len()), ("d_soft", parts.d_soft.len()), ("d_hard", parts.d_hard.len())] {
            if found != n {
                return Err(InstanceError::LengthMismatch { field, expected: n, found });
            }
        }
        if let Some(w) = &parts.weights {
            if w.len() != n {
                return Err(InstanceError::LengthMismatch { field: "weights", expected: n, found: w.len() });
            }
            if let Some(vehicle) = w.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
                return Err(InstanceError::InvalidWeight { vehicle });
            }
        } else if parts.objective.is_weighted() {
            return Err(InstanceError::MissingWeights(parts.objective));
        }

        let graph = &parts.graph;
        for (j, walk) in parts.walks.iter().enumerate() {
            if walk.vertices.is_empty() {
                return Err(InstanceError::EmptyWalk { vehicle: j });
            }
            let links = walk.vertices.len() - 1;
            for (field, found) in [("tau_min", walk.tau_min.len()), ("tau_max", walk.tau_max.len())] {
                if found != links {
                    return Err(InstanceError::WalkLengthMismatch { vehicle: j, field, expected: links, found });
                }
            }
            if let Some(step) = walk.vertices.iter().position(|&v| v >= graph.vertex_count()) {
                return Err(InstanceError::VertexOutOfRange { vehicle: j, step, vertex: walk.vertices[step] });
            }
            for link in 0..links {
                let (from, to) = (walk.vertices[link], walk.vertices[link + 1]);
                if !graph.has_edge(from, to) {
                    return Err(InstanceError::MissingEdge { vehicle: j, link, from, to });
                }
                if walk.tau_min[link] < 0 {
                    return Err(InstanceError::NegativeTauMin { vehicle: j, link });
                }
                if !le_opt(Some(walk.tau_min[link]), walk.tau_max[link]) {
                    return Err(InstanceError::EmptyTravelWindow { vehicle: j, link });
                }
            }
            // An unbounded soft deadline means "no soft deadline" and is allowed
            // alongside a finite hard one.
            let soft_ok = parts.d_soft[j].is_none_or(|d| parts.rho[j] <= d && le_opt(Some(d), parts.d_hard[j]));
            if !(soft_ok && le_opt(Some(parts.rho[j]), parts.d_hard[j])) {
                return Err(InstanceError::DeadlineOrder { vehicle: j });
            }
        }

        let mut separations = Separations::default();
        for &(a, b, s) in &parts.separations {
            let vertex_of = |v: Visit| parts.walks.get(v.vehicle).and_then(|w| w.vertices.get(v.step)).copied();
            let (Some(va), Some(vb)) = (vertex_of(a), vertex_of(b)) else {
                return Err(InstanceError::SeparationIndex { a, b });
            };
            if a.vehicle == b.vehicle {
                return Err(InstanceError::SeparationSameVehicle { a, b });
            }
            if va != vb {
                return Err(InstanceError::SeparationVertexMismatch { a, b, va, vb });
            }
            if s < 0 {
                return Err(InstanceError::NegativeSeparation { a, b });
            }
            let key = canonical(a, b);
            if let Some(&first) = separations.pairs.get(&key) {
                if first != s {
                    return Err(InstanceError::ConflictingSeparation { a: key.0, b: key.1, first, second: s });
                }
            }
            separations.pairs.insert(key, s);
        }

        let mut visits_by_vertex = vec![Vec::new(); graph.vertex_count()];
        for (j, walk) in parts.walks.iter().enumerate() {
            for (i, &v) in walk.vertices.iter().enumerate() {
                visits_by_vertex[v].push(Visit::new(j, i));
            }
        }

        Ok(Self { parts, separations, visits_by_vertex })
    }

    pub fn graph(&self) -> &Graph {
        &self.parts.graph
    }

    pub fn vehicle_count(&self) -> usize {
        self.parts.walks.len()
    }

    pub fn walks(&self) -> &[Walk] {
        &self.parts.walks
    }

    pub fn walk(&self, vehicle: usize) -> &Walk {
        &self.parts.walks[vehicle]
    }

    /// Total number of time stamps, `q`.
    pub fn total_visits(&self) -> usize {
        self.parts.walks.iter().map(Walk::len).sum()
    }

    pub fn vertex_of(&self, visit: Visit) -> usize {
        self.parts.walks[visit.vehicle].vertices[visit.step]
    }

    pub fn rho(&self, vehicle: usize) -> Tick {
        self.parts.rho[vehicle]
    }

    pub fn d_soft(&self, vehicle: usize) -> Option<Tick> {
        self.parts.d_soft[vehicle]
    }

    pub fn d_hard(&self, vehicle: usize) -> Option<Tick> {
        self.parts.d_hard[vehicle]
    }

    pub fn separations(&self) -> &Separations {
        &self.separations
    }

    pub fn separation(&self, a: Visit, b: Visit) -> Option<Tick> {
        self.separations.get(a, b)
    }

    /// All visits to `vertex`, ordered by vehicle then step.
    pub fn visits_at(&self, vertex: usize) -> &[Visit] {
        &self.visits_by_vertex[vertex]
    }

    pub fn objective(&self) -> ObjectiveKind {
        self.parts.objective
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.parts.weights.as_deref()
    }

    /// Weight of a vehicle, 1 when the instance is unweighted.
    pub fn weight(&self, vehicle: usize) -> f64 {
        self.parts.weights.as_ref().map_or(1.0, |w| w[vehicle])
    }

    pub fn time_scale(&self) -> TimeScale {
        self.parts.time_scale
    }

    pub fn parts(&self) -> &InstanceParts {
        &self.parts
    }

    /// Raw parts with separations normalised to one entry per unordered pair.
    pub fn into_parts(self) -> InstanceParts {
        let mut parts = self.parts;
        parts.separations = self.separations.iter().collect();
        parts
    }

    pub fn with_soft_deadlines(&self, d_soft: Vec<Option<Tick>>) -> Result<Self, InstanceError> {
        let mut parts = self.clone().into_parts();
        parts.d_soft = d_soft;
        Self::new(parts)
    }

    pub fn with_hard_deadlines(&self, d_hard: Vec<Option<Tick>>) -> Result<Self, InstanceError> {
        let mut parts = self.clone().into_parts();
        parts.d_hard = d_hard;
        Self::new(parts)
    }

    pub fn with_objective(&self, objective: ObjectiveKind) -> Result<Self, InstanceError> {
        let mut parts = self.clone().into_parts();
        parts.objective = objective;
        Self::new(parts)
    }
}
