use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use xsim_core::analysis::{hypervolume, median, normalize_objectives};
use xsim_core::derive_seed;
use xsim_core::fitness::{CanonicalEvaluator, ScenarioOutcome};
use xsim_core::search::{nondominated_indices, nsga2_run, nsga2_run_until, random_search_run, RunResult, SearchConfig};

use crate::artifacts::{
    ensure_dir, evaluation_record, scenario_record, write_csv, write_json, CampaignSummary, RunArtifact, RunSummary,
    ScenarioArtifact, EVALUATION_COLUMNS, SCENARIO_COLUMNS, SCHEMA_VERSION,
};
use crate::config::{Algorithm, CampaignConfig};
use crate::error::{CliError, CliResult};

/// Everything a campaign produced, in run order.
#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub runs: Vec<RunArtifact>,
    /// Every evaluated outcome, per run, in evaluation order.
    pub evaluated: Vec<Vec<ScenarioOutcome>>,
    pub summary: CampaignSummary,
}

fn run_one(cfg: &CampaignConfig, run: usize) -> CliResult<(RunArtifact, Vec<ScenarioOutcome>)> {
    let seed = derive_seed(cfg.seed, run as u64);
    let search = SearchConfig { seed, ..cfg.search };
    let space = cfg.input_space();
    let evaluator = CanonicalEvaluator {
        evaluator: cfg.evaluator(cfg.backend),
        seed,
    };
    let result: RunResult<ScenarioOutcome> = match (cfg.algorithm, cfg.time_limit_s) {
        (Algorithm::Nsga2, None) => nsga2_run(&search, &space, &evaluator)?,
        (Algorithm::Nsga2, Some(limit)) => {
            let start = Instant::now();
            let limit = Duration::from_secs_f64(limit);
            nsga2_run_until(&search, &space, &evaluator, |_| start.elapsed() >= limit)?
        }
        (Algorithm::Random, None) => random_search_run(&search, &space, &evaluator)?,
        (Algorithm::Random, Some(_)) => {
            return Err(CliError::Config(
                "campaign.time_limit_s is only supported by the nsga2 algorithm".into(),
            ))
        }
    };

    let mut scenarios = Vec::with_capacity(result.final_population.len());
    for (k, ind) in result.final_population.iter().enumerate() {
        let evaluation = result
            .evaluated
            .iter()
            .position(|e| e.input == ind.input && e.outcome == ind.outcome)
            .ok_or_else(|| CliError::Internal("final population member was never evaluated".into()))?;
        scenarios.push(ScenarioArtifact::new(
            k,
            evaluation as u64,
            ind.input,
            ind.outcome.clone(),
        ));
    }
    let objs: Vec<[f64; 3]> = result.final_population.iter().map(|i| i.objectives).collect();
    let artifact = RunArtifact {
        schema_version: SCHEMA_VERSION,
        run,
        seed,
        algorithm: cfg.algorithm,
        backend: cfg.backend,
        frame: Some(cfg.backend_config(cfg.backend).frame),
        evaluations: result.evaluations(),
        config: cfg.clone(),
        scenarios,
        front: nondominated_indices(&objs),
        generations: if cfg.record_generations {
            result.generations
        } else {
            Vec::new()
        },
    };
    Ok((artifact, result.evaluated.into_iter().map(|i| i.outcome).collect()))
}

/// Runs all repetitions of a campaign without touching the file system.
///
/// Run `i` uses seed `derive_seed(master, i)`; runs execute in parallel and
/// results are independent of scheduling.
pub fn run_campaign(cfg: &CampaignConfig) -> CliResult<CampaignResult> {
    cfg.validate()?;
    let results: Vec<(RunArtifact, Vec<ScenarioOutcome>)> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| run_one(cfg, r))
        .collect::<CliResult<_>>()?;
    let (runs, evaluated): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let summary = summarize(cfg, &runs)?;
    Ok(CampaignResult {
        runs,
        evaluated,
        summary,
    })
}

fn summarize(cfg: &CampaignConfig, runs: &[RunArtifact]) -> CliResult<CampaignSummary> {
    let all: Vec<[f64; 3]> = runs.iter().flat_map(|r| r.front_objectives()).collect();
    let (_, bounds) = normalize_objectives(&all)?;
    let mut per_run = Vec::with_capacity(runs.len());
    for r in runs {
        let pts: Vec<[f64; 3]> = r.front_objectives().iter().map(|p| bounds.normalize(p)).collect();
        per_run.push(RunSummary {
            run: r.run,
            seed: r.seed,
            evaluations: r.evaluations,
            scenarios: r.scenarios.len(),
            front_size: r.front.len(),
            critical: r.scenarios.iter().filter(|s| s.critical).count(),
            violations: r.scenarios.iter().filter(|s| s.violation).count(),
            hypervolume: hypervolume(&pts, &[1.0; 3])?,
        });
    }
    let hvs: Vec<f64> = per_run.iter().map(|r| r.hypervolume).collect();
    Ok(CampaignSummary {
        schema_version: SCHEMA_VERSION,
        algorithm: cfg.algorithm,
        backend: cfg.backend,
        master_seed: cfg.seed,
        total_scenarios: per_run.iter().map(|r| r.scenarios).sum(),
        total_critical: per_run.iter().map(|r| r.critical).sum(),
        total_violations: per_run.iter().map(|r| r.violations).sum(),
        hypervolume_median: median(&hvs),
        normalization_min: bounds.min,
        normalization_max: bounds.max,
        runs: per_run,
    })
}

/// Runs a campaign and writes `run_NNN.json`, `scenarios.csv`,
/// `evaluations.csv` and `summary.json` into `out`.
pub fn search(cfg: &CampaignConfig, out: &Path) -> CliResult<CampaignResult> {
    let result = run_campaign(cfg)?;
    ensure_dir(out)?;
    result
        .runs
        .par_iter()
        .try_for_each(|r| write_json(&out.join(RunArtifact::file_name(r.run)), r))?;
    let scenario_rows = result
        .runs
        .iter()
        .flat_map(|r| r.scenarios.iter().map(move |s| scenario_record(r, s)));
    write_csv(&out.join("scenarios.csv"), &SCENARIO_COLUMNS, scenario_rows)?;
    let eval_rows = result
        .evaluated
        .iter()
        .enumerate()
        .flat_map(|(run, outs)| outs.iter().enumerate().map(move |(i, o)| evaluation_record(run, i, o)));
    write_csv(&out.join("evaluations.csv"), &EVALUATION_COLUMNS, eval_rows)?;
    write_json(&out.join("summary.json"), &result.summary)?;
    Ok(result)
}
