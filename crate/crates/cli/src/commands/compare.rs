use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use xsim_core::analysis::{hypervolume, mann_whitney_u, median, normalize_objectives};

use crate::artifacts::{load_runs, write_json, RunArtifact, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};

/// Significance level of the comparison.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    SignificantDifference,
    NoSignificantDifference,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SignificantDifference => "significant difference",
            Verdict::NoSignificantDifference => "no significant difference",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub schema_version: u32,
    pub hypervolume_a: Vec<f64>,
    pub hypervolume_b: Vec<f64>,
    pub median_a: f64,
    pub median_b: f64,
    /// Mann-Whitney U of side A.
    pub u: f64,
    pub p_value: f64,
    pub exact: bool,
    pub alpha: f64,
    pub verdict: Verdict,
    pub normalization_min: [f64; 3],
    pub normalization_max: [f64; 3],
}

impl fmt::Display for CompareSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "runs            A={} B={}",
            self.hypervolume_a.len(),
            self.hypervolume_b.len()
        )?;
        writeln!(f, "median HV       A={:.6} B={:.6}", self.median_a, self.median_b)?;
        writeln!(
            f,
            "Mann-Whitney U  {} (p = {:.6}{})",
            self.u,
            self.p_value,
            if self.exact { ", exact" } else { "" }
        )?;
        writeln!(f, "verdict         {} at alpha = {}", self.verdict, self.alpha)
    }
}

/// Per-run hypervolume of two sets of runs after normalising over both.
pub fn compare_runs(a: &[RunArtifact], b: &[RunArtifact]) -> CliResult<CompareSummary> {
    for (side, runs) in [("A", a), ("B", b)] {
        if runs.len() < 2 {
            return Err(CliError::Data(format!(
                "side {side} has {} run(s); at least 2 are needed",
                runs.len()
            )));
        }
    }
    let all: Vec<[f64; 3]> = a.iter().chain(b).flat_map(|r| r.front_objectives()).collect();
    let (_, bounds) = normalize_objectives(&all)?;
    let hv = |runs: &[RunArtifact]| -> CliResult<Vec<f64>> {
        runs.iter()
            .map(|r| {
                let pts: Vec<[f64; 3]> = r.front_objectives().iter().map(|p| bounds.normalize(p)).collect();
                Ok(hypervolume(&pts, &[1.0; 3])?)
            })
            .collect()
    };
    let (ha, hb) = (hv(a)?, hv(b)?);
    let mw = mann_whitney_u(&ha, &hb)?;
    Ok(CompareSummary {
        schema_version: SCHEMA_VERSION,
        median_a: median(&ha),
        median_b: median(&hb),
        hypervolume_a: ha,
        hypervolume_b: hb,
        u: mw.u,
        p_value: mw.p_value,
        exact: mw.exact,
        alpha: ALPHA,
        verdict: if mw.p_value < ALPHA {
            Verdict::SignificantDifference
        } else {
            Verdict::NoSignificantDifference
        },
        normalization_min: bounds.min,
        normalization_max: bounds.max,
    })
}

/// Compares the runs in two artifact directories; writes JSON to `out` if given.
pub fn compare(dir_a: &Path, dir_b: &Path, out: Option<&Path>) -> CliResult<CompareSummary> {
    let summary = compare_runs(&load_runs(dir_a)?, &load_runs(dir_b)?)?;
    if let Some(p) = out {
        write_json(p, &summary)?;
    }
    Ok(summary)
}
