use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use xsim_core::analysis::{tree_fit, TreeNode, TreeParams};
use xsim_core::scene::TestInput;

use crate::artifacts::{ensure_dir, read_scenarios_csv, write_json, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeArtifact {
    pub schema_version: u32,
    pub params: TreeParams,
    pub samples: usize,
    pub violations: usize,
    pub tree: TreeNode,
}

/// Fits a violation tree to a scenarios table and writes `tree.json` and
/// `tree.txt` into `out`.
pub fn diagnose(scenarios_csv: &Path, params: TreeParams, out: &Path) -> CliResult<TreeArtifact> {
    let rows = read_scenarios_csv(scenarios_csv)?;
    let inputs: Vec<TestInput> = rows.iter().map(|r| r.input()).collect();
    let labels: Vec<bool> = rows.iter().map(|r| r.violation).collect();
    let tree = tree_fit(&inputs, &labels, params)?;
    let artifact = TreeArtifact {
        schema_version: SCHEMA_VERSION,
        params,
        samples: rows.len(),
        violations: labels.iter().filter(|&&v| v).count(),
        tree,
    };
    ensure_dir(out)?;
    write_json(&out.join("tree.json"), &artifact)?;
    let text = artifact.tree.to_string();
    let path = out.join("tree.txt");
    fs::write(&path, text).map_err(|e| CliError::write(&path, e))?;
    Ok(artifact)
}
