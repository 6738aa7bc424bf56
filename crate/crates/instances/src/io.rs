//! JSON file formats.
//!
//! Instance files:
//!
//! ```json
//! {
//!   "vertices": 3,
//!   "edges": [[0, 2], [1, 2]],
//!   "walks": [{"vertices": [0, 2], "tau_min": [50], "tau_max": [null]}],
//!   "rho": [0],
//!   "d_soft": [60],
//!   "d_hard": [null],
//!   "separations": [[0, 1, 1, 1, 5]],
//!   "objective": "tardy_count",
//!   "weights": null,
//!   "ticks_per_unit": 1
//! }
//! ```
//!
//! `null` stands for `+∞`. A separation entry is `[j1, i1, j2, i2, s]`.
//! `objective`, `weights` and `ticks_per_unit` may be omitted (defaults
//! `tardy_count`, none, 1). Unknown keys are rejected.
//!
//! Schedule files are `{"times": [[...], ...]}`. Job shop files are
//! `{"machines": K, "jobs": [[m, ...], ...], "r": [...], "delta": [...],
//! "theta": bool}` with 0-based machine indices, plus optional
//! `hard_deadlines` (default false), `objective` (default `makespan`) and
//! `weights`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use vsp_core::{Graph, Instance, InstanceError, InstanceParts, ObjectiveKind, Schedule, Tick, TimeScale, Visit, Walk};

use crate::jsp::JspInstance;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown objective `{0}`")]
    Objective(String),
    #[error("ticks_per_unit must be positive")]
    TimeScale,
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WalkFile {
    vertices: Vec<usize>,
    tau_min: Vec<Tick>,
    tau_max: Vec<Option<Tick>>,
}

fn default_objective() -> String {
    ObjectiveKind::TardyCount.name().to_owned()
}

fn default_ticks() -> u32 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    walks: Vec<WalkFile>,
    rho: Vec<Tick>,
    d_soft: Vec<Option<Tick>>,
    d_hard: Vec<Option<Tick>>,
    separations: Vec<(usize, usize, usize, usize, Tick)>,
    #[serde(default = "default_objective")]
    objective: String,
    #[serde(default)]
    weights: Option<Vec<f64>>,
    #[serde(default = "default_ticks")]
    ticks_per_unit: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    times: Vec<Vec<Tick>>,
}

fn default_jsp_objective() -> String {
    ObjectiveKind::Makespan.name().to_owned()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JspFile {
    machines: usize,
    jobs: Vec<Vec<usize>>,
    r: Vec<Tick>,
    delta: Vec<Option<Tick>>,
    theta: bool,
    #[serde(default)]
    hard_deadlines: bool,
    #[serde(default = "default_jsp_objective")]
    objective: String,
    #[serde(default)]
    weights: Option<Vec<f64>>,
}

fn parse_objective(name: &str) -> Result<ObjectiveKind, FormatError> {
    name.parse().map_err(|_| FormatError::Objective(name.to_owned()))
}

pub fn instance_to_json(instance: &Instance) -> String {
    let parts = instance.parts();
    let file = InstanceFile {
        vertices: parts.graph.vertex_count(),
        edges: parts.graph.edges().collect(),
        walks: parts
            .walks
            .iter()
            .map(|w| WalkFile { vertices: w.vertices.clone(), tau_min: w.tau_min.clone(), tau_max: w.tau_max.clone() })
            .collect(),
        rho: parts.rho.clone(),
        d_soft: parts.d_soft.clone(),
        d_hard: parts.d_hard.clone(),
        separations: instance.separations().iter().map(|(a, b, s)| (a.vehicle, a.step, b.vehicle, b.step, s)).collect(),
        objective: parts.objective.name().to_owned(),
        weights: parts.weights.clone(),
        ticks_per_unit: parts.time_scale.ticks_per_unit(),
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance, FormatError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let graph = Graph::new(file.vertices, file.edges).map_err(InstanceError::from)?;
    let walks = file
        .walks
        .into_iter()
        .map(|w| Walk { vertices: w.vertices, tau_min: w.tau_min, tau_max: w.tau_max })
        .collect();
    let mut parts = InstanceParts::new(graph, walks);
    parts.rho = file.rho;
    parts.d_soft = file.d_soft;
    parts.d_hard = file.d_hard;
    parts.separations =
        file.separations.into_iter().map(|(j1, i1, j2, i2, s)| (Visit::new(j1, i1), Visit::new(j2, i2), s)).collect();
    parts.objective = parse_objective(&file.objective)?;
    parts.weights = file.weights;
    parts.time_scale = TimeScale::new(file.ticks_per_unit).ok_or(FormatError::TimeScale)?;
    Ok(Instance::new(parts)?)
}

pub fn schedule_to_json(schedule: &Schedule) -> String {
    serde_json::to_string(&ScheduleFile { times: schedule.times().to_vec() }).expect("schedule serializes")
}

pub fn schedule_from_json(text: &str) -> Result<Schedule, FormatError> {
    let file: ScheduleFile = serde_json::from_str(text)?;
    Ok(Schedule::new(file.times))
}

pub fn jsp_to_json(jsp: &JspInstance) -> String {
    let file = JspFile {
        machines: jsp.machines,
        jobs: jsp.jobs.clone(),
        r: jsp.r.clone(),
        delta: jsp.delta.clone(),
        theta: jsp.theta,
        hard_deadlines: jsp.hard_deadlines,
        objective: jsp.objective.name().to_owned(),
        weights: jsp.weights.clone(),
    };
    serde_json::to_string_pretty(&file).expect("job shop serializes")
}

pub fn jsp_from_json(text: &str) -> Result<JspInstance, FormatError> {
    let file: JspFile = serde_json::from_str(text)?;
    Ok(JspInstance {
        machines: file.machines,
        jobs: file.jobs,
        r: file.r,
        delta: file.delta,
        theta: file.theta,
        hard_deadlines: file.hard_deadlines,
        objective: parse_objective(&file.objective)?,
        weights: file.weights,
    })
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, FormatError> {
    instance_from_json(&read(path.as_ref())?)
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &instance_to_json(instance))
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule, FormatError> {
    schedule_from_json(&read(path.as_ref())?)
}

pub fn write_schedule(schedule: &Schedule, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &schedule_to_json(schedule))
}

pub fn read_jsp(path: impl AsRef<Path>) -> Result<JspInstance, FormatError> {
    jsp_from_json(&read(path.as_ref())?)
}

pub fn write_jsp(jsp: &JspInstance, path: impl AsRef<Path>) -> Result<(), FormatError> {
    write(path.as_ref(), &jsp_to_json(jsp))
}
