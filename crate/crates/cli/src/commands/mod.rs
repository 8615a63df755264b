//! One module per subcommand. Each takes fully parsed arguments, writes its
//! artifacts and returns a value that tests can inspect.

mod compare;
mod diagnose;
mod replay;
mod search;
mod xsim;

pub use compare::{compare, compare_runs, CompareSummary, Verdict, ALPHA};
pub use diagnose::{diagnose, TreeArtifact};
pub use replay::{replay, ReplayArtifact, TRACE_COLUMNS};
pub use search::{run_campaign, search, CampaignResult};
pub use xsim::{xsim, XSimArtifact, XSimScenario};

use xsim_core::simulator::BackendId;

use crate::error::{CliError, CliResult};

/// Parses a backend name, reporting the valid choices on failure.
pub fn parse_backend(name: &str) -> CliResult<BackendId> {
    name.parse().map_err(|e| CliError::Config(format!("{e}")))
}
