use std::fs;
use std::io;
use std::path::Path;

use serde_json::json;

use crate::sweep::{SweepConfig, SweepResult};

pub const TARDY_HEADER: [&str; 5] = ["n", "ratio", "algorithm", "mean_tardy_fraction", "stderr"];
pub const RUNTIME_HEADER: [&str; 3] = ["n", "algorithm", "mean_worst_runtime_s"];

fn csv_error(err: csv::Error) -> io::Error {
    io::Error::other(err)
}

pub fn tardy_csv(result: &SweepResult, out: impl io::Write) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(TARDY_HEADER).map_err(csv_error)?;
    for cell in &result.tardy {
        writer
            .write_record([
                cell.n.to_string(),
                format!("{:.2}", cell.ratio),
                cell.algorithm.to_string(),
                format!("{:.6}", cell.mean_tardy_fraction),
                format!("{:.6}", cell.stderr),
            ])
            .map_err(csv_error)?;
    }
    writer.flush()
}

pub fn runtime_csv(result: &SweepResult, out: impl io::Write) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(RUNTIME_HEADER).map_err(csv_error)?;
    for cell in &result.runtime {
        writer
            .write_record([cell.n.to_string(), cell.algorithm.to_string(), format!("{:.6}", cell.mean_worst_runtime_s)])
            .map_err(csv_error)?;
    }
    writer.flush()
}

/// Writes `tardy.csv` and `runtime.csv` into `dir`, creating it if needed.
pub fn emit_csv(result: &SweepResult, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    tardy_csv(result, fs::File::create(dir.join("tardy.csv"))?)?;
    runtime_csv(result, fs::File::create(dir.join("runtime.csv"))?)
}

/// Resolved configuration plus per-status run counts.
pub fn manifest(config: &SweepConfig, result: &SweepResult) -> serde_json::Value {
    let e = &config.experiment;
    let mut statuses = serde_json::Map::new();
    for record in &result.records {
        let key = format!("{}/{:?}", record.algorithm, record.status);
        let count = statuses.get(&key).and_then(serde_json::Value::as_u64).unwrap_or(0);
        statuses.insert(key, json!(count + 1));
    }
    json!({
        "grid": e.grid.to_string(),
        "bidirectional": e.grid.bidirectional,
        "vehicle_counts": config.vehicle_counts,
        "instances": e.n_instances,
        "seed": e.seed,
        "ratios": e.soft_deadline_ratios,
        "separation": e.separation,
        "tau_min_link": e.tau_min_link,
        "tau_max_link": e.tau_max_link,
        "hard_deadline_factor": e.hard_deadline_factor,
        "hard_deadline_basis": format!("{:?}", e.hard_deadline_basis),
        "algorithms": config.algorithms.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "exact_max_vehicles": config.exact_max_vehicles,
        "exact_time_limit_s": config.exact_time_limit.map(|d| d.as_secs_f64()),
        "timing": "wall clock of scheduling only; runtime columns are not reproducible",
        "run_status_counts": statuses,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn write_manifest(config: &SweepConfig, result: &SweepResult, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(&manifest(config, result)).map_err(io::Error::other)?;
    fs::write(dir.join("manifest.json"), text + "\n")
}
