//! Campaign runner and command-line front-end for `xsim-core`.
//!
//! The `xsim` binary exposes five subcommands (`search`, `xsim`, `compare`,
//! `diagnose`, `replay`); this library holds their implementations so they
//! can be driven from tests and scripts as well.

pub mod artifacts;
pub mod commands;
pub mod config;
pub mod error;

pub use error::{CliError, CliResult};
