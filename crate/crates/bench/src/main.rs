use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use vsp_bench::{emit_csv, parse_list, parse_ratios, run_sweep, write_manifest, Algorithm, SweepConfig};
use vsp_core::{evaluate, validate_schedule, Instance, Schedule, Tick};
use vsp_exact::{export_mip, solve_exact, SolveOptions, SolveStatus};
use vsp_heuristics::{deadline_and_proximity_with, run_dispatch_with, DispatchConfig, Mode, NegativeSlack};
use vsp_instances::{
    generate_grid_instance, read_instance, read_jsp, reduce_jsp_to_vsp, write_instance, write_schedule,
    ExperimentConfig, GridSpec, HardDeadlineBasis,
};

const EXIT_ERROR: u8 = 1;
const EXIT_HARD_DEADLINE: u8 = 2;
const EXIT_SLOT_FAILURE: u8 = 3;
const EXIT_INCUMBENT: u8 = 4;
const EXIT_NO_SCHEDULE: u8 = 5;

type Error = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "vsp", version, about = "Vehicle scheduling: dispatch heuristics, exact solver and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Proximity,
    Abs,
    Rel,
    /// Best of the three modes.
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum SlackArg {
    /// Negative slack ranks after every non-negative slack.
    Prose,
    /// Negative slack is clamped to zero.
    Pseudocode,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    /// Hard deadline factor times the minimum free trip time.
    Trip,
    /// Hard deadline factor times vertex count times link time.
    Vertices,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule an instance with a dispatch heuristic.
    Schedule {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "best")]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "prose")]
        negative_slack: SlackArg,
    },
    /// Solve an instance exactly (tardy count objectives).
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Use the exact branch and bound (the only solver of this command).
        #[arg(long, required = true)]
        exact: bool,
        /// Time limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Cap on every completion time, in ticks.
        #[arg(long)]
        horizon: Option<Tick>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the big-M model in CPLEX LP format.
    ExportMip {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        horizon: Option<Tick>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random grid instance.
    Generate {
        #[arg(long, default_value = "5x5")]
        grid: GridSpec,
        #[arg(long)]
        vehicles: usize,
        #[arg(long)]
        ratio: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        separation: Tick,
        #[arg(long, default_value_t = 50)]
        tau_min: Tick,
        /// Maximum link time; unbounded if omitted.
        #[arg(long)]
        tau_max: Option<Tick>,
        #[arg(long, default_value_t = 2.2)]
        hard_factor: f64,
        #[arg(long, value_enum, default_value = "trip")]
        hard_basis: BasisArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert a unit job shop file into an instance.
    ReduceJsp {
        #[arg(long)]
        jsp: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a schedule against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Deadline-ratio sweep writing tardy.csv, runtime.csv and manifest.json.
    Bench {
        #[arg(long, default_value = "5x5")]
        grid: GridSpec,
        #[arg(long, default_value = "25,50,75,100")]
        vehicles: String,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// `start:stop:step` or a comma list.
        #[arg(long, default_value = "1.0:2.0:0.1")]
        ratios: String,
        #[arg(long, default_value = "baseline,heuristic")]
        algorithms: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        exact_max_vehicles: usize,
        /// Seconds per exact run.
        #[arg(long, default_value_t = 3600.0)]
        exact_time_limit: f64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn seconds(s: f64) -> Result<Duration, Error> {
    Ok(Duration::try_from_secs_f64(s).map_err(|e| format!("bad duration {s}: {e}"))?)
}

fn summary(instance: &Instance, schedule: &Schedule) -> String {
    let kind = instance.objective();
    match evaluate(instance, schedule, kind) {
        Ok(value) => format!("{kind} = {value}"),
        Err(e) => format!("{kind}: {e}"),
    }
}

fn schedule_cmd(instance: PathBuf, mode: ModeArg, out: PathBuf, slack: SlackArg) -> Result<u8, Error> {
    let instance = read_instance(instance)?;
    let config = DispatchConfig {
        negative_slack: match slack {
            SlackArg::Prose => NegativeSlack::LowestPriority,
            SlackArg::Pseudocode => NegativeSlack::ClampToZero,
        },
    };
    let single = |mode| run_dispatch_with(&instance, mode, &config);
    let outcome = match mode {
        ModeArg::Proximity => single(Mode::Proximity),
        ModeArg::Abs => single(Mode::AbsDeadlineProximity),
        ModeArg::Rel => single(Mode::RelDeadlineProximity),
        ModeArg::Best => match deadline_and_proximity_with(&instance, &config) {
            Ok(best) => {
                eprintln!("chosen mode: {}", best.chosen.name());
                best.outcome().clone()
            }
            Err(e) => {
                eprintln!("{e}");
                return Ok(EXIT_SLOT_FAILURE);
            }
        },
    };
    let Some(schedule) = outcome.schedule() else {
        eprintln!("{} vehicle(s) found no slot within their travel windows", outcome.slot_failures());
        return Ok(EXIT_SLOT_FAILURE);
    };
    write_schedule(&schedule, out)?;
    println!("{}", summary(&instance, &schedule));
    let late = outcome.hard_deadline_violations();
    if late > 0 {
        eprintln!("{late} vehicle(s) finish after their hard deadline");
        return Ok(EXIT_HARD_DEADLINE);
    }
    Ok(0)
}

fn solve_cmd(instance: PathBuf, time_limit: Option<f64>, horizon: Option<Tick>, out: PathBuf) -> Result<u8, Error> {
    let instance = read_instance(instance)?;
    let options = SolveOptions { time_limit: time_limit.map(seconds).transpose()?, horizon, ..Default::default() };
    let result = solve_exact(&instance, &options)?;
    eprintln!("status: {:?}, nodes: {}", result.status, result.nodes);
    if let Some(witness) = &result.witness {
        eprintln!("infeasible without separations; positive cycle:");
        for k in witness {
            eprintln!("  t[{}] - t[{}] >= {}", k.x, k.y, k.c);
        }
    }
    let Some(schedule) = result.schedule else {
        return Ok(EXIT_NO_SCHEDULE);
    };
    write_schedule(&schedule, out)?;
    println!("{}", summary(&instance, &schedule));
    Ok(if result.status == SolveStatus::Optimal { 0 } else { EXIT_INCUMBENT })
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Schedule { instance, mode, out, negative_slack } => schedule_cmd(instance, mode, out, negative_slack),
        Command::Solve { instance, exact: _, time_limit, horizon, out } => solve_cmd(instance, time_limit, horizon, out),
        Command::ExportMip { instance, horizon, out } => {
            let instance = read_instance(instance)?;
            std::fs::write(out, export_mip(&instance, horizon)?)?;
            Ok(0)
        }
        Command::Generate {
            grid,
            vehicles,
            ratio,
            seed,
            separation,
            tau_min,
            tau_max,
            hard_factor,
            hard_basis,
            out,
        } => {
            let mut config = ExperimentConfig::standard(vehicles);
            config.grid = grid;
            config.separation = separation;
            config.tau_min_link = tau_min;
            config.tau_max_link = tau_max;
            config.hard_deadline_factor = hard_factor;
            config.hard_deadline_basis = match hard_basis {
                BasisArg::Trip => HardDeadlineBasis::FreeTripTime,
                BasisArg::Vertices => HardDeadlineBasis::VertexCount,
            };
            config.soft_deadline_ratios = vec![ratio];
            write_instance(&generate_grid_instance(&config, ratio, seed)?, out)?;
            Ok(0)
        }
        Command::ReduceJsp { jsp, out } => {
            write_instance(&reduce_jsp_to_vsp(&read_jsp(jsp)?)?, out)?;
            Ok(0)
        }
        Command::Validate { instance, schedule } => {
            let instance = read_instance(instance)?;
            let schedule = vsp_instances::read_schedule(schedule)?;
            let report = validate_schedule(&instance, &schedule)?;
            for v in &report.violations {
                println!("{v}");
            }
            println!("{} violation(s); {}", report.len(), summary(&instance, &schedule));
            Ok(if report.is_empty() { 0 } else { EXIT_ERROR })
        }
        Command::Bench {
            grid,
            vehicles,
            instances,
            ratios,
            algorithms,
            seed,
            exact_max_vehicles,
            exact_time_limit,
            out_dir,
        } => {
            let mut config = SweepConfig::new(parse_list(&vehicles)?);
            config.experiment.grid = grid;
            config.experiment.n_instances = instances;
            config.experiment.soft_deadline_ratios = parse_ratios(&ratios)?;
            config.experiment.seed = seed;
            config.algorithms = parse_list::<Algorithm>(&algorithms)?;
            config.exact_max_vehicles = exact_max_vehicles;
            config.exact_time_limit = Some(seconds(exact_time_limit)?);
            let result = run_sweep(&config)?;
            emit_csv(&result, &out_dir)?;
            write_manifest(&config, &result, &out_dir)?;
            eprintln!("wrote {} tardy rows and {} runtime rows to {}", result.tardy.len(), result.runtime.len(), out_dir.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
