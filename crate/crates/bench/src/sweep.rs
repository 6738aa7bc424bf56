use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;
use vsp_core::{evaluate, validate_schedule, Instance, ObjectiveKind, Schedule};
use vsp_exact::{solve_exact, ExactError, SolveOptions, SolveStatus};
use vsp_heuristics::{deadline_and_proximity, run_dispatch, Mode};
use vsp_instances::{generate_grid_instance, instance_seed, ExperimentConfig, GenerateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Proximity dispatch alone.
    Baseline,
    /// Best of the three dispatch modes.
    Heuristic,
    /// Branch and bound under a time limit.
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Baseline, Algorithm::Heuristic, Algorithm::Exact];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::Heuristic => "heuristic",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Grid, link times, deadlines, ratios, instance count and seed. Its
    /// `n_vehicles` is overridden by `vehicle_counts`.
    pub experiment: ExperimentConfig,
    pub vehicle_counts: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// The exact solver only runs for at most this many vehicles.
    pub exact_max_vehicles: usize,
    pub exact_time_limit: Option<Duration>,
    /// Run instances on the rayon thread pool.
    pub parallel: bool,
}

impl SweepConfig {
    /// Baseline and heuristic on the given vehicle counts with the default
    /// experiment parameters. Exact runs, when added, stop at 25 vehicles
    /// with a one hour limit.
    pub fn new(vehicle_counts: Vec<usize>) -> Self {
        Self {
            experiment: ExperimentConfig::standard(vehicle_counts.first().copied().unwrap_or(1)),
            vehicle_counts,
            algorithms: vec![Algorithm::Baseline, Algorithm::Heuristic],
            exact_max_vehicles: 25,
            exact_time_limit: Some(Duration::from_secs(3600)),
            parallel: true,
        }
    }

    fn seed_for(&self, n: usize, index: usize) -> u64 {
        instance_seed(instance_seed(self.experiment.seed, n as u64), index as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Complete schedule within every hard deadline.
    Complete,
    /// Complete schedule, but some vehicle finished after its hard deadline.
    HardDeadlineViolated,
    /// Exact search finished.
    Optimal,
    /// Exact search ran out of time; the schedule is the best found.
    Incumbent,
    /// No schedule: slot window failures, infeasibility or an exhausted
    /// budget.
    NoSchedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub n: usize,
    pub instance: usize,
    pub seed: u64,
    pub ratio: f64,
    pub algorithm: Algorithm,
    pub status: RunStatus,
    pub tardy: Option<usize>,
    pub runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TardyCell {
    pub n: usize,
    pub ratio: f64,
    pub algorithm: Algorithm,
    pub mean_tardy_fraction: f64,
    pub stderr: f64,
    /// Instances with a schedule.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeCell {
    pub n: usize,
    pub algorithm: Algorithm,
    /// Worst runtime over ratios, averaged over instances.
    pub mean_worst_runtime_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub records: Vec<RunRecord>,
    pub tardy: Vec<TardyCell>,
    pub runtime: Vec<RuntimeCell>,
}

impl SweepResult {
    pub fn tardy_cell(&self, n: usize, ratio_index: usize, algorithm: Algorithm) -> Option<&TardyCell> {
        let mut ratios: Vec<f64> = self.tardy.iter().filter(|c| c.n == n).map(|c| c.ratio).collect();
        ratios.dedup();
        let ratio = *ratios.get(ratio_index)?;
        self.tardy.iter().find(|c| c.n == n && c.ratio == ratio && c.algorithm == algorithm)
    }

    pub fn runtime_cell(&self, n: usize, algorithm: Algorithm) -> Option<&RuntimeCell> {
        self.runtime.iter().find(|c| c.n == n && c.algorithm == algorithm)
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("the exact solver needs a time limit in a sweep")]
    ExactWithoutTimeLimit,
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{algorithm} produced an invalid schedule for n={n}, instance {instance}, ratio {ratio}:\n{report}")]
    InvalidSchedule { n: usize, instance: usize, ratio: f64, algorithm: Algorithm, report: String },
}

struct Run {
    status: RunStatus,
    schedule: Option<Schedule>,
    runtime_s: f64,
}

fn run_algorithm(config: &SweepConfig, algorithm: Algorithm, instance: &Instance) -> Result<Run, SweepError> {
    let started = Instant::now();
    let (status, schedule) = match algorithm {
        Algorithm::Baseline => {
            let outcome = run_dispatch(instance, Mode::Proximity);
            let status = if outcome.hard_deadline_violations() > 0 {
                RunStatus::HardDeadlineViolated
            } else {
                RunStatus::Complete
            };
            match outcome.schedule() {
                Some(schedule) => (status, Some(schedule)),
                None => (RunStatus::NoSchedule, None),
            }
        }
        Algorithm::Heuristic => match deadline_and_proximity(instance) {
            Ok(best) => {
                let status = if best.outcome().hard_deadline_violations() > 0 {
                    RunStatus::HardDeadlineViolated
                } else {
                    RunStatus::Complete
                };
                (status, Some(best.schedule))
            }
            Err(_) => (RunStatus::NoSchedule, None),
        },
        Algorithm::Exact => {
            let options = SolveOptions { time_limit: config.exact_time_limit, ..Default::default() };
            let result = solve_exact(instance, &options)?;
            let status = match result.status {
                SolveStatus::Optimal => RunStatus::Optimal,
                SolveStatus::FeasibleIncumbent => RunStatus::Incumbent,
                SolveStatus::Infeasible | SolveStatus::BudgetExhausted => RunStatus::NoSchedule,
            };
            (status, result.schedule)
        }
    };
    Ok(Run { status, schedule, runtime_s: started.elapsed().as_secs_f64() })
}

/// All runs for one generated instance family: every ratio, every algorithm.
fn run_instance(config: &SweepConfig, n: usize, index: usize) -> Result<Vec<RunRecord>, SweepError> {
    let mut experiment = config.experiment.clone();
    experiment.n_vehicles = n;
    let seed = config.seed_for(n, index);
    let mut records = Vec::new();
    for &ratio in &experiment.soft_deadline_ratios {
        let instance = generate_grid_instance(&experiment, ratio, seed)?;
        for &algorithm in &config.algorithms {
            if algorithm == Algorithm::Exact && n > config.exact_max_vehicles {
                continue;
            }
            let run = run_algorithm(config, algorithm, &instance)?;
            let tardy = match &run.schedule {
                Some(schedule) => {
                    let report = validate_schedule(&instance, schedule).expect("solvers emit well-shaped schedules");
                    // heuristics report hard deadline misses instead of repairing them
                    let report = if algorithm == Algorithm::Exact { report } else { report.without_hard_deadlines() };
                    if !report.is_empty() {
                        let report = report.violations.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n");
                        return Err(SweepError::InvalidSchedule { n, instance: index, ratio, algorithm, report });
                    }
                    let count = evaluate(&instance, schedule, ObjectiveKind::TardyCount).expect("shape checked");
                    Some(count as usize)
                }
                None => None,
            };
            records.push(RunRecord {
                n,
                instance: index,
                seed,
                ratio,
                algorithm,
                status: run.status,
                tardy,
                runtime_s: run.runtime_s,
            });
        }
    }
    Ok(records)
}

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (variance / k).sqrt())
}

fn aggregate(config: &SweepConfig, records: Vec<RunRecord>) -> SweepResult {
    let mut tardy = Vec::new();
    let mut runtime = Vec::new();
    for &n in &config.vehicle_counts {
        for &ratio in &config.experiment.soft_deadline_ratios {
            for &algorithm in &config.algorithms {
                let fractions: Vec<f64> = records
                    .iter()
                    .filter(|r| r.n == n && r.ratio == ratio && r.algorithm == algorithm)
                    .filter_map(|r| r.tardy.map(|t| t as f64 / n as f64))
                    .collect();
                if fractions.is_empty() {
                    continue;
                }
                let (mean, stderr) = mean_and_stderr(&fractions);
                tardy.push(TardyCell { n, ratio, algorithm, mean_tardy_fraction: mean, stderr, count: fractions.len() });
            }
        }
        for &algorithm in &config.algorithms {
            let worst: Vec<f64> = (0..config.experiment.n_instances)
                .filter_map(|index| {
                    records
                        .iter()
                        .filter(|r| r.n == n && r.instance == index && r.algorithm == algorithm)
                        .map(|r| r.runtime_s)
                        .reduce(f64::max)
                })
                .collect();
            if !worst.is_empty() {
                let mean_worst_runtime_s = worst.iter().sum::<f64>() / worst.len() as f64;
                runtime.push(RuntimeCell { n, algorithm, mean_worst_runtime_s });
            }
        }
    }
    SweepResult { records, tardy, runtime }
}

/// Generates every instance, runs every algorithm on it, validates each
/// schedule and aggregates tardy fractions and runtimes. Only scheduling is
/// timed. Instances run in parallel when configured; the runs for one
/// instance are sequential.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult, SweepError> {
    if config.algorithms.contains(&Algorithm::Exact) && config.exact_time_limit.is_none() {
        return Err(SweepError::ExactWithoutTimeLimit);
    }
    config.experiment.validate()?;
    let tasks: Vec<(usize, usize)> = config
        .vehicle_counts
        .iter()
        .flat_map(|&n| (0..config.experiment.n_instances).map(move |index| (n, index)))
        .collect();
    let per_task: Vec<Vec<RunRecord>> = if config.parallel {
        tasks.par_iter().map(|&(n, index)| run_instance(config, n, index)).collect::<Result<_, _>>()?
    } else {
        tasks.iter().map(|&(n, index)| run_instance(config, n, index)).collect::<Result<_, _>>()?
    };
    Ok(aggregate(config, per_task.into_iter().flatten().collect()))
}
