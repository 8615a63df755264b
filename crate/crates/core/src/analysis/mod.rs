//! Outcome classification, front quality, statistics and diagnosis.

mod classify;
mod hypervolume;
mod stats;
mod tree;
mod xsim;

pub use classify::{classify, ClassifiedScenario, NEAR_MISS_FF1, NEAR_MISS_FF3};
pub use hypervolume::{hypervolume, normalize_objectives, ObjectiveBounds};
pub use stats::{mann_whitney_u, median, MannWhitney};
pub use tree::{tree_fit, TreeNode, TreeParams};
pub use xsim::{
    xsim_categorize, xsim_report, CategoryCounts, Histogram, XSimCategory, XSimReport, XSimRow, DEFAULT_BIN_WIDTHS,
};
