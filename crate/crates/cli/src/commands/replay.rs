use std::path::Path;

use serde::{Deserialize, Serialize};
use xsim_core::analysis::classify;
use xsim_core::fitness::ScenarioOutcome;
use xsim_core::scene::translate;
use xsim_core::simulator::BackendId;
use xsim_core::{derive_seed, seeded_rng};

use crate::artifacts::{fmt_f64, load_runs, write_csv, write_json, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};

pub const TRACE_COLUMNS: [&str; 14] = [
    "t", "car_x", "car_y", "car_vx", "car_vy", "ped_x", "ped_y", "ped_vx", "ped_vy", "dist", "awa_dist", "ttc",
    "sensed", "warned",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayArtifact {
    pub schema_version: u32,
    pub run: usize,
    pub scenario: usize,
    pub backend: BackendId,
    pub outcome: ScenarioOutcome,
    pub critical: bool,
    pub violation: bool,
    pub samples: usize,
}

/// Re-simulates one stored scenario and writes its trace to `out` (CSV)
/// plus the outcome next to it (`.json`).
///
/// The trace is the lossless one; the outcome uses the stored evaluation
/// seed, so on the original backend it equals the stored outcome.
pub fn replay(
    runs_dir: &Path,
    run: usize,
    scenario: usize,
    backend: Option<BackendId>,
    out: &Path,
) -> CliResult<ReplayArtifact> {
    let runs = load_runs(runs_dir)?;
    let r = runs
        .iter()
        .find(|r| r.run == run)
        .ok_or_else(|| CliError::Data(format!("unknown run {run} in {}", runs_dir.display())))?;
    let s = r
        .scenarios
        .iter()
        .find(|s| s.scenario == scenario)
        .ok_or_else(|| CliError::Data(format!("unknown scenario {scenario} in run {run}")))?;
    let target = backend.unwrap_or(r.backend);
    let input = translate(&s.outcome.input, &r.frame()?, &r.config.backend_config(target).frame);
    let evaluator = r.config.evaluator(target);

    let record = evaluator.record(&input)?;
    let outcome = evaluator.evaluate(&input, &mut seeded_rng(derive_seed(r.seed, s.evaluation)))?;

    let rows = record.trace.samples.iter().enumerate().map(|(k, p)| {
        let mut rec: Vec<String> = [
            p.t,
            p.car.pos.x,
            p.car.pos.y,
            p.car.vel.x,
            p.car.vel.y,
            p.ped.pos.x,
            p.ped.pos.y,
            p.ped.vel.x,
            p.ped.vel.y,
            p.distance,
            record.awa_distance[k],
            record.ttc[k],
        ]
        .iter()
        .map(|v| fmt_f64(*v))
        .collect();
        rec.push(p.sensed.is_some().to_string());
        rec.push(record.detection.warnings[k].to_string());
        rec
    });
    write_csv(out, &TRACE_COLUMNS, rows)?;

    let c = classify(&outcome);
    let artifact = ReplayArtifact {
        schema_version: SCHEMA_VERSION,
        run,
        scenario,
        backend: target,
        critical: c.critical,
        violation: c.violation,
        samples: record.trace.samples.len(),
        outcome,
    };
    write_json(&out.with_extension("json"), &artifact)?;
    Ok(artifact)
}
