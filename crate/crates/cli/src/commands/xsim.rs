use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use xsim_core::analysis::{classify, xsim_report, ClassifiedScenario, XSimCategory, XSimReport, DEFAULT_BIN_WIDTHS};
use xsim_core::scene::{translate, TestInput};
use xsim_core::simulator::BackendId;
use xsim_core::{derive_seed, seeded_rng};

use crate::artifacts::{ensure_dir, fmt_f64, load_runs, write_csv, write_json, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XSimScenario {
    pub run: usize,
    pub scenario: usize,
    pub category: XSimCategory,
    /// Input in the source backend's frame.
    pub source_input: TestInput,
    /// The same input translated into the target backend's frame.
    pub target_input: TestInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XSimArtifact {
    pub schema_version: u32,
    pub source: BackendId,
    pub target: BackendId,
    /// Reported scenarios that were not critical on the source backend and
    /// therefore have no reproduction category.
    pub skipped_noncritical: usize,
    /// Parallel to `report.rows`.
    pub scenarios: Vec<XSimScenario>,
    pub report: XSimReport,
}

/// Re-executes every critical reported scenario of the runs in `runs_dir` on
/// `target` and writes `xsim_report.json`, `xsim_diff.csv` and
/// `xsim_histograms.csv` into `out`.
///
/// Each re-execution reuses the seed of the original evaluation, so a
/// reproduction on the source backend itself is exact.
pub fn xsim(runs_dir: &Path, target: BackendId, out: &Path) -> CliResult<XSimArtifact> {
    let runs = load_runs(runs_dir)?;
    let source = runs[0].backend;
    if let Some(r) = runs.iter().find(|r| r.backend != source) {
        return Err(CliError::Data(format!(
            "runs mix backends ({} and {}); reproduce one source backend at a time",
            source, r.backend
        )));
    }

    let mut jobs = Vec::new();
    let mut skipped = 0;
    for r in &runs {
        let from = r.frame()?;
        let to = r.config.backend_config(target).frame;
        for s in &r.scenarios {
            if !s.critical {
                skipped += 1;
                continue;
            }
            jobs.push((r, s, translate(&s.outcome.input, &from, &to)));
        }
    }
    if jobs.is_empty() {
        return Err(CliError::Data("no critical scenarios to reproduce".into()));
    }

    let results: Vec<(ClassifiedScenario, ClassifiedScenario)> = jobs
        .par_iter()
        .map(|(r, s, input)| {
            let evaluator = r.config.evaluator(target);
            let mut rng = seeded_rng(derive_seed(r.seed, s.evaluation));
            let reproduced = evaluator.evaluate(input, &mut rng)?;
            Ok((classify(&s.outcome), classify(&reproduced)))
        })
        .collect::<CliResult<_>>()?;

    let direction = format!("{source}->{target}");
    let report = xsim_report(&results, &direction, DEFAULT_BIN_WIDTHS)?;
    let scenarios = jobs
        .iter()
        .zip(&report.rows)
        .map(|((r, s, input), row)| XSimScenario {
            run: r.run,
            scenario: s.scenario,
            category: row.category,
            source_input: s.outcome.input,
            target_input: *input,
        })
        .collect();
    let artifact = XSimArtifact {
        schema_version: SCHEMA_VERSION,
        source,
        target,
        skipped_noncritical: skipped,
        scenarios,
        report,
    };

    ensure_dir(out)?;
    write_json(&out.join("xsim_report.json"), &artifact)?;
    let diff_rows = artifact.scenarios.iter().zip(&artifact.report.rows).map(|(s, row)| {
        let mut rec = vec![s.run.to_string(), s.scenario.to_string(), row.category.to_string()];
        rec.extend(
            row.source
                .iter()
                .chain(&row.reproduced)
                .chain(&row.difference)
                .map(|v| fmt_f64(*v)),
        );
        rec
    });
    write_csv(
        &out.join("xsim_diff.csv"),
        &[
            "run",
            "scenario",
            "category",
            "ff1_source",
            "ff2_source",
            "ff3_source",
            "ff1_target",
            "ff2_target",
            "ff3_target",
            "ff1_diff",
            "ff2_diff",
            "ff3_diff",
        ],
        diff_rows,
    )?;
    let hist_rows = artifact.report.histograms.iter().flat_map(|h| {
        h.counts.iter().enumerate().map(move |(i, c)| {
            vec![
                h.objective.clone(),
                fmt_f64(i as f64 * h.bin_width),
                fmt_f64((i + 1) as f64 * h.bin_width),
                c.to_string(),
            ]
        })
    });
    write_csv(
        &out.join("xsim_histograms.csv"),
        &["objective", "bin_lo", "bin_hi", "count"],
        hist_rows,
    )?;
    Ok(artifact)
}
