//! On-disk formats: per-run JSON, combined CSV tables and summaries.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use xsim_core::analysis::classify;
use xsim_core::fitness::ScenarioOutcome;
use xsim_core::scene::{FrameSpec, TestInput};
use xsim_core::search::GenerationSnapshot;
use xsim_core::simulator::BackendId;

use crate::config::{Algorithm, CampaignConfig};
use crate::error::{CliError, CliResult};

/// Version of every JSON artifact written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

pub const SCENARIO_COLUMNS: [&str; 18] = [
    "run",
    "scenario",
    "v0c",
    "x0p",
    "y0p",
    "theta_p",
    "v0p",
    "ff1",
    "ff2",
    "ff3",
    "collision",
    "detected",
    "detection_time",
    "termination",
    "critical",
    "violation",
    "backend",
    "seed",
];

pub const EVALUATION_COLUMNS: [&str; 14] = [
    "run",
    "evaluation",
    "v0c",
    "x0p",
    "y0p",
    "theta_p",
    "v0p",
    "ff1",
    "ff2",
    "ff3",
    "collision",
    "detected",
    "critical",
    "violation",
];

/// One reported scenario of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioArtifact {
    pub scenario: usize,
    /// Zero-based evaluation index within the run; seeds its channel draws.
    pub evaluation: u64,
    pub canonical_input: TestInput,
    /// `outcome.input` is expressed in the run backend's frame.
    pub outcome: ScenarioOutcome,
    pub critical: bool,
    pub violation: bool,
}

impl ScenarioArtifact {
    pub fn new(scenario: usize, evaluation: u64, canonical_input: TestInput, outcome: ScenarioOutcome) -> Self {
        let c = classify(&outcome);
        ScenarioArtifact {
            scenario,
            evaluation,
            canonical_input,
            critical: c.critical,
            violation: c.violation,
            outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub schema_version: u32,
    pub run: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub backend: BackendId,
    /// Frame of every native input in this file.
    pub frame: Option<FrameSpec>,
    pub evaluations: usize,
    pub config: CampaignConfig,
    /// The run's final population (NSGA-II) or nondominated samples (random search).
    pub scenarios: Vec<ScenarioArtifact>,
    /// Indices into `scenarios` of the nondominated members.
    pub front: Vec<usize>,
    /// Nondominated set after each generation, when recorded.
    pub generations: Vec<GenerationSnapshot>,
}

impl RunArtifact {
    pub fn file_name(run: usize) -> String {
        format!("run_{run:03}.json")
    }

    /// Frame of the stored inputs; artifacts without one cannot be translated.
    pub fn frame(&self) -> CliResult<FrameSpec> {
        self.frame.ok_or_else(|| {
            CliError::Data(format!(
                "run {} has no frame specification; cannot translate inputs",
                self.run
            ))
        })
    }

    pub fn front_objectives(&self) -> Vec<[f64; 3]> {
        self.front
            .iter()
            .map(|&i| self.scenarios[i].outcome.objectives())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub scenarios: usize,
    pub front_size: usize,
    pub critical: usize,
    pub violations: usize,
    /// Normalised over the fronts of this campaign, reference point (1, 1, 1).
    pub hypervolume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub schema_version: u32,
    pub algorithm: Algorithm,
    pub backend: BackendId,
    pub master_seed: u64,
    pub runs: Vec<RunSummary>,
    pub total_scenarios: usize,
    pub total_critical: usize,
    pub total_violations: usize,
    pub hypervolume_median: f64,
    pub normalization_min: [f64; 3],
    pub normalization_max: [f64; 3],
}

fn fmt_bool(b: bool) -> String {
    b.to_string()
}

/// Renders a float so that parsing it back gives the same value.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn scenario_record(run: &RunArtifact, s: &ScenarioArtifact) -> Vec<String> {
    let o = &s.outcome;
    let x = o.input;
    vec![
        run.run.to_string(),
        s.scenario.to_string(),
        fmt_f64(x.v0c),
        fmt_f64(x.x0p),
        fmt_f64(x.y0p),
        fmt_f64(x.theta_p),
        fmt_f64(x.v0p),
        fmt_f64(o.ff1),
        fmt_f64(o.ff2),
        fmt_f64(o.ff3),
        fmt_bool(o.collision),
        fmt_bool(o.detected),
        o.detection_time.map(fmt_f64).unwrap_or_default(),
        o.termination.as_str().to_string(),
        fmt_bool(s.critical),
        fmt_bool(s.violation),
        run.backend.as_str().to_string(),
        run.seed.to_string(),
    ]
}

pub fn evaluation_record(run: usize, evaluation: usize, o: &ScenarioOutcome) -> Vec<String> {
    let c = classify(o);
    let x = o.input;
    vec![
        run.to_string(),
        evaluation.to_string(),
        fmt_f64(x.v0c),
        fmt_f64(x.x0p),
        fmt_f64(x.y0p),
        fmt_f64(x.theta_p),
        fmt_f64(x.v0p),
        fmt_f64(o.ff1),
        fmt_f64(o.ff2),
        fmt_f64(o.ff3),
        fmt_bool(o.collision),
        fmt_bool(o.detected),
        fmt_bool(c.critical),
        fmt_bool(c.violation),
    ]
}

/// A row of the scenarios table as read back for diagnosis.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScenarioRow {
    pub run: usize,
    pub scenario: usize,
    pub v0c: f64,
    pub x0p: f64,
    pub y0p: f64,
    pub theta_p: f64,
    pub v0p: f64,
    pub ff1: f64,
    pub ff2: f64,
    pub ff3: f64,
    pub collision: bool,
    pub detected: bool,
    pub detection_time: Option<f64>,
    pub termination: String,
    pub critical: bool,
    pub violation: bool,
    pub backend: String,
    pub seed: u64,
}

impl ScenarioRow {
    pub fn input(&self) -> TestInput {
        TestInput::new(self.v0c, self.x0p, self.y0p, self.theta_p, self.v0p)
    }
}

pub fn read_scenarios_csv(path: &Path) -> CliResult<Vec<ScenarioRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_read_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_read_error(path, e))?.clone();
    for col in ["v0c", "x0p", "y0p", "theta_p", "v0p", "violation"] {
        if !headers.iter().any(|h| h == col) {
            return Err(CliError::Data(format!("{}: missing column `{col}`", path.display())));
        }
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| CliError::Data(format!("{}: row {}: {e}", path.display(), i + 1))))
        .collect()
}

fn csv_read_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::read(path, io),
        other => CliError::Data(format!("{}: {other:?}", path.display())),
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header).map_err(internal)?;
    for r in rows {
        w.write_record(&r).map_err(internal)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(path, bytes).map_err(|e| CliError::write(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    fs::write(path, s).map_err(|e| CliError::write(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::write(path, e))
}

/// Loads every `run_*.json` in `dir`, ordered by run number.
pub fn load_runs(dir: &Path) -> CliResult<Vec<RunArtifact>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::read(dir, e))?;
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let p = entry.map_err(|e| CliError::read(dir, e))?.path();
        let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("run_") && name.ends_with(".json") {
            paths.push(p);
        }
    }
    let mut runs: Vec<RunArtifact> = paths.iter().map(|p| read_json(p)).collect::<CliResult<_>>()?;
    for r in &runs {
        if r.schema_version != SCHEMA_VERSION {
            return Err(CliError::Data(format!(
                "run {} has schema version {}, expected {SCHEMA_VERSION}",
                r.run, r.schema_version
            )));
        }
    }
    runs.sort_by_key(|r| r.run);
    if runs.is_empty() {
        return Err(CliError::Data(format!(
            "no run artifacts (run_*.json) in {}",
            dir.display()
        )));
    }
    Ok(runs)
}
