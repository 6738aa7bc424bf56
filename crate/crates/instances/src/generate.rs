use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;
use vsp_core::{min_free_trip_time, GraphError, Instance, InstanceError, InstanceParts, Tick, Walk};

use crate::grid::{distances_to, shortest_path, GridSpec};

/// What the hard-deadline factor multiplies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum HardDeadlineBasis {
    /// Minimum free trip time, `(q_j - 1) * tau_min`.
    #[default]
    FreeTripTime,
    /// Vertex count times link time, `q_j * tau_min`.
    VertexCount,
}

/// Random grid experiment parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub n_vehicles: usize,
    pub separation: Tick,
    pub tau_min_link: Tick,
    /// `None` is `+∞`.
    pub tau_max_link: Option<Tick>,
    pub hard_deadline_factor: f64,
    pub hard_deadline_basis: HardDeadlineBasis,
    pub soft_deadline_ratios: Vec<f64>,
    pub n_instances: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    /// 5x5 bidirectional grid, separation 5, link times in `[50, ∞)`, hard
    /// deadline 2.2 times the free trip time, 20 instances, ratios 1.0 to 2.0
    /// in steps of 0.1.
    pub fn standard(n_vehicles: usize) -> Self {
        Self {
            grid: GridSpec::new(5, 5),
            n_vehicles,
            separation: 5,
            tau_min_link: 50,
            tau_max_link: None,
            hard_deadline_factor: 2.2,
            hard_deadline_basis: HardDeadlineBasis::FreeTripTime,
            soft_deadline_ratios: default_ratios(),
            n_instances: 20,
            seed: 42,
        }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        if self.grid.vertex_count() < 2 {
            return Err(GenerateError::DegenerateGrid(self.grid));
        }
        if self.n_vehicles == 0 || self.n_instances == 0 {
            return Err(GenerateError::Config("vehicle and instance counts must be positive".into()));
        }
        if self.separation < 0 || self.tau_min_link < 0 || self.tau_max_link.is_some_and(|m| m < self.tau_min_link) {
            return Err(GenerateError::Config("separation and link times must be non-negative with tau_min <= tau_max".into()));
        }
        if self.soft_deadline_ratios.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GenerateError::Config("soft deadline ratios must be strictly increasing".into()));
        }
        if self.soft_deadline_ratios.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(GenerateError::Config("soft deadline ratios must be finite and non-negative".into()));
        }
        let max_ratio = self.soft_deadline_ratios.last().copied().unwrap_or(0.0);
        if !(self.hard_deadline_factor.is_finite() && self.hard_deadline_factor >= max_ratio) {
            return Err(GenerateError::Config("hard deadline factor must be at least the largest ratio".into()));
        }
        Ok(())
    }
}

/// `1.0, 1.1, …, 2.0`.
pub fn default_ratios() -> Vec<f64> {
    (10..=20).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("grid {0} needs at least two vertices")]
    DegenerateGrid(GridSpec),
    #[error("grid has no pair of distinct vertices connected by a path")]
    NoRoutes,
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// `floor(factor * base)`, guarding against representation error just below
/// an integer. Since stamps are integers, `C > x` iff `C > floor(x)`.
fn scaled_floor(factor: f64, base: Tick) -> Tick {
    (factor * base as f64 + 1e-9).floor() as Tick
}

/// Seed of the `index`-th instance of an experiment (splitmix64 step).
pub fn instance_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random grid instance: `n_vehicles` source/destination pairs drawn
/// uniformly (with replacement across vehicles), each routed along the
/// lexicographically smallest shortest path, with uniform link windows,
/// uniform separation at every shared vertex, request time 0, soft deadline
/// `ratio` and hard deadline `hard_deadline_factor` times the free trip time.
///
/// The walks depend only on `seed`, so the same seed with different ratios
/// yields the same routes.
pub fn generate_grid_instance(config: &ExperimentConfig, ratio: f64, seed: u64) -> Result<Instance, GenerateError> {
    config.validate()?;
    if !(ratio.is_finite() && ratio >= 0.0 && ratio <= config.hard_deadline_factor) {
        return Err(GenerateError::Config(format!("ratio {ratio} must lie in [0, hard_deadline_factor]")));
    }
    let graph = config.grid.graph()?;
    let n = graph.vertex_count();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|t| distances_to(&graph, t)).collect();
    let routes: Vec<(usize, usize)> =
        (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).filter(|&(s, t)| s != t && dist[t][s].is_some()).collect();
    if routes.is_empty() {
        return Err(GenerateError::NoRoutes);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let walks: Vec<Walk> = (0..config.n_vehicles)
        .map(|_| {
            let (s, t) = routes[rng.random_range(0..routes.len())];
            let path = shortest_path(&graph, s, t, &dist[t]).expect("route is reachable");
            Walk::uniform(path, config.tau_min_link, config.tau_max_link)
        })
        .collect();

    let mut parts = InstanceParts::new(graph, walks).with_uniform_separation(config.separation);
    let provisional = Instance::new(parts.clone())?;
    let free: Vec<Tick> = (0..config.n_vehicles).map(|j| min_free_trip_time(&provisional, j)).collect();
    parts.d_soft = free.iter().map(|&f| Some(scaled_floor(ratio, f))).collect();
    parts.d_hard = parts
        .walks
        .iter()
        .zip(&free)
        .map(|(walk, &f)| {
            let base = match config.hard_deadline_basis {
                HardDeadlineBasis::FreeTripTime => f,
                HardDeadlineBasis::VertexCount => walk.len() as Tick * config.tau_min_link,
            };
            Some(scaled_floor(config.hard_deadline_factor, base))
        })
        .collect();
    Ok(Instance::new(parts)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_configuration_is_valid() {
        let cfg = ExperimentConfig::standard(25);
        cfg.validate().unwrap();
        assert_eq!(cfg.soft_deadline_ratios.len(), 11);
        assert_eq!(cfg.separation, 5);
        assert_eq!(cfg.tau_min_link, 50);
        assert_eq!(cfg.tau_max_link, None);
    }

    #[test]
    fn degenerate_grid_rejected() {
        let mut cfg = ExperimentConfig::standard(3);
        cfg.grid = GridSpec::new(1, 1);
        assert!(matches!(generate_grid_instance(&cfg, 1.0, 0), Err(GenerateError::DegenerateGrid(_))));
    }

    #[test]
    fn ratios_must_increase() {
        let mut cfg = ExperimentConfig::standard(3);
        cfg.soft_deadline_ratios = vec![1.0, 1.0];
        assert!(cfg.validate().is_err());
        cfg.soft_deadline_ratios = vec![1.0, 2.5];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deadlines_scale_free_trip_time() {
        let cfg = ExperimentConfig::standard(30);
        let inst = generate_grid_instance(&cfg, 1.5, 7).unwrap();
        for j in 0..inst.vehicle_count() {
            let free = min_free_trip_time(&inst, j);
            assert_eq!(free, 50 * (inst.walk(j).len() as Tick - 1));
            assert_eq!(inst.d_soft(j), Some(free * 3 / 2));
            assert_eq!(inst.d_hard(j), Some(free * 22 / 10));
            assert_eq!(inst.rho(j), 0);
        }
        // a five-vertex trip: 1.5 * 200
        let j = (0..inst.vehicle_count()).find(|&j| inst.walk(j).len() == 5).unwrap();
        assert_eq!(inst.d_soft(j), Some(300));
    }

    #[test]
    fn vertex_count_basis() {
        let mut cfg = ExperimentConfig::standard(10);
        cfg.hard_deadline_basis = HardDeadlineBasis::VertexCount;
        let inst = generate_grid_instance(&cfg, 1.0, 3).unwrap();
        for j in 0..inst.vehicle_count() {
            assert_eq!(inst.d_hard(j), Some(inst.walk(j).len() as Tick * 110));
        }
    }

    #[test]
    fn awkward_ratio_rounds_down_exactly() {
        // 1.15 * 200 is 229.99999999999997 in binary floating point
        assert_eq!(scaled_floor(1.15, 200), 230);
        assert_eq!(scaled_floor(2.2, 450), 990);
    }
}
