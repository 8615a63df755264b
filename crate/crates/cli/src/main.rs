use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xsim::commands::{self, parse_backend};
use xsim::config::CampaignConfig;
use xsim::CliResult;
use xsim_core::analysis::TreeParams;

/// Search-based generation and cross-simulator reproduction of pedestrian
/// detection test scenarios.
#[derive(Debug, Parser)]
#[command(name = "xsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a campaign of independent searches and write its artifacts.
    Search {
        /// Configuration file (`section.key = value` lines).
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Extra `section.key=value` assignments applied after the file.
        #[arg(short = 's', long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output directory; overrides `campaign.output`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-execute the critical scenarios of a campaign on another backend.
    Xsim {
        /// Directory holding `run_*.json` files.
        #[arg(long)]
        runs: PathBuf,
        /// Backend to reproduce on.
        #[arg(long)]
        target: String,
        #[arg(short, long, default_value = "xsim-report")]
        out: PathBuf,
    },
    /// Compare the hypervolume of two campaigns (Mann-Whitney U).
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Also write the statistics as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Fit a decision tree that characterises safety violations.
    Diagnose {
        /// A `scenarios.csv` written by `search`.
        #[arg(long)]
        scenarios: PathBuf,
        #[arg(long, default_value_t = TreeParams::default().max_depth)]
        max_depth: usize,
        #[arg(long, default_value_t = TreeParams::default().min_leaf)]
        min_leaf: usize,
        #[arg(short, long, default_value = "xsim-tree")]
        out: PathBuf,
    },
    /// Re-simulate one stored scenario and dump its trace.
    Replay {
        #[arg(long)]
        runs: PathBuf,
        #[arg(long)]
        run: usize,
        #[arg(long)]
        scenario: usize,
        /// Backend to replay on (default: the one that produced the run).
        #[arg(long)]
        backend: Option<String>,
        /// Trace CSV path; the outcome is written next to it as `.json`.
        #[arg(short, long, default_value = "trace.csv")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Search { config, set, out } => {
            let cfg = CampaignConfig::load(config.as_deref(), &set)?;
            let out = out.unwrap_or_else(|| cfg.output.clone());
            let res = commands::search(&cfg, &out)?;
            let s = &res.summary;
            println!(
                "{} runs on {} ({}): {} scenarios, {} critical, {} violations, median HV {:.6}",
                s.runs.len(),
                s.backend,
                s.algorithm.as_str(),
                s.total_scenarios,
                s.total_critical,
                s.total_violations,
                s.hypervolume_median
            );
            println!("artifacts in {}", out.display());
        }
        Command::Xsim { runs, target, out } => {
            let target = parse_backend(&target)?;
            let a = commands::xsim(&runs, target, &out)?;
            let c = &a.report.counts;
            println!(
                "{}: {} scenarios ({} non-critical skipped)",
                a.report.direction,
                c.total(),
                a.skipped_noncritical
            );
            println!(
                "1a={} 1b={} 1c={} | 2a={} 2b={} 2c={}",
                c.c1a, c.c1b, c.c1c, c.c2a, c.c2b, c.c2c
            );
            println!("report in {}", out.display());
        }
        Command::Compare { a, b, out } => {
            let s = commands::compare(&a, &b, out.as_deref())?;
            print!("{s}");
        }
        Command::Diagnose {
            scenarios,
            max_depth,
            min_leaf,
            out,
        } => {
            let t = commands::diagnose(&scenarios, TreeParams { max_depth, min_leaf }, &out)?;
            print!("{}", t.tree);
        }
        Command::Replay {
            runs,
            run,
            scenario,
            backend,
            out,
        } => {
            let backend = backend.as_deref().map(parse_backend).transpose()?;
            let r = commands::replay(&runs, run, scenario, backend, &out)?;
            let o = &r.outcome;
            println!(
                "run {} scenario {} on {}: ff1={} ff2={} ff3={} critical={} violation={} ({} samples)",
                r.run, r.scenario, r.backend, o.ff1, o.ff2, o.ff3, r.critical, r.violation, r.samples
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("xsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
