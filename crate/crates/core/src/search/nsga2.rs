use alloc::vec::Vec;

use rand::Rng;

use super::operators::{binary_tournament, gaussian_mutation, sbx_crossover};
use super::sorting::{crowding_distance, fast_nondominated_sort, nondominated_indices};
use super::{Evaluator, FrontMember, GenerationSnapshot, Individual, Objectives, RunResult, SearchConfig};
use crate::scene::{sample_uniform, InputSpace, TestInput};
use crate::{seeded_rng, Error, Result};

/// State reported to the stop predicate after every generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub generation: usize,
    pub evaluations: usize,
}

/// Runs NSGA-II until the evaluation budget is spent.
pub fn nsga2_run<E: Evaluator>(cfg: &SearchConfig, space: &InputSpace, evaluator: &E) -> Result<RunResult<E::Outcome>> {
    nsga2_run_until(cfg, space, evaluator, |_| false)
}

/// Like [`nsga2_run`], additionally stopping after any generation for which
/// `stop` returns true (used for wall-clock budgets).
pub fn nsga2_run_until<E, S>(
    cfg: &SearchConfig,
    space: &InputSpace,
    evaluator: &E,
    mut stop: S,
) -> Result<RunResult<E::Outcome>>
where
    E: Evaluator,
    S: FnMut(Progress) -> bool,
{
    cfg.validate()?;
    space.validate()?;
    let mut rng = seeded_rng(cfg.seed);
    let sigmas = cfg.sigmas(space);
    let n = cfg.population_size;

    let inputs: Vec<TestInput> = (0..n).map(|_| sample_uniform(space, &mut rng)).collect();
    let mut evaluated = make_individuals(cfg, &inputs, evaluator.evaluate_batch(&inputs, 0)?);
    let mut population = evaluated.clone();
    assign_rank_and_crowding(&mut population);

    let mut generations = Vec::new();
    generations.push(snapshot(0, evaluated.len(), &population));
    let mut generation = 0;

    while evaluated.len() < cfg.budget
        && !stop(Progress {
            generation,
            evaluations: evaluated.len(),
        })
    {
        generation += 1;
        let lambda = n.min(cfg.budget - evaluated.len());
        let mut offspring: Vec<TestInput> = Vec::with_capacity(lambda + 1);
        while offspring.len() < lambda {
            let p1 = population[binary_tournament(&population, &mut rng)].input;
            let p2 = population[binary_tournament(&population, &mut rng)].input;
            let (c1, c2) = if rng.random::<f64>() < cfg.crossover_rate {
                sbx_crossover(&p1, &p2, cfg.eta, space, &mut rng)
            } else {
                (p1, p2)
            };
            offspring.push(gaussian_mutation(&c1, cfg.mutation_rate, &sigmas, space, &mut rng));
            offspring.push(gaussian_mutation(&c2, cfg.mutation_rate, &sigmas, space, &mut rng));
        }
        offspring.truncate(lambda);

        let outcomes = evaluator.evaluate_batch(&offspring, evaluated.len() as u64)?;
        let children = make_individuals(cfg, &offspring, outcomes);
        evaluated.extend(children.iter().cloned());

        let mut combined = population;
        combined.extend(children);
        population = environmental_selection(combined, n);
        generations.push(snapshot(generation, evaluated.len(), &population));
    }

    let final_front = front_of(&population);
    Ok(RunResult {
        final_population: population,
        final_front,
        evaluated,
        generations,
        seed: cfg.seed,
        config: *cfg,
    })
}

/// Uniform sampling of the whole budget. The reported solutions are the
/// nondominated samples.
pub fn random_search_run<E: Evaluator>(
    cfg: &SearchConfig,
    space: &InputSpace,
    evaluator: &E,
) -> Result<RunResult<E::Outcome>> {
    space.validate()?;
    if cfg.budget == 0 {
        return Err(Error::BudgetTooSmall {
            budget: 0,
            population: 1,
        });
    }
    let mut rng = seeded_rng(cfg.seed);
    let inputs: Vec<TestInput> = (0..cfg.budget).map(|_| sample_uniform(space, &mut rng)).collect();
    let evaluated = make_individuals(cfg, &inputs, evaluator.evaluate_batch(&inputs, 0)?);

    let chunk = cfg.population_size.max(1);
    let mut generations = Vec::new();
    let mut end = chunk.min(evaluated.len());
    loop {
        let mut seen = evaluated[..end].to_vec();
        assign_rank_and_crowding(&mut seen);
        generations.push(snapshot(generations.len(), end, &seen));
        if end == evaluated.len() {
            break;
        }
        end = (end + chunk).min(evaluated.len());
    }

    let mut all = evaluated.clone();
    assign_rank_and_crowding(&mut all);
    let final_front = front_of(&all);
    Ok(RunResult {
        final_population: final_front.clone(),
        final_front,
        evaluated,
        generations,
        seed: cfg.seed,
        config: *cfg,
    })
}

fn make_individuals<O: super::HasObjectives>(
    cfg: &SearchConfig,
    inputs: &[TestInput],
    outcomes: Vec<O>,
) -> Vec<Individual<O>> {
    inputs
        .iter()
        .zip(outcomes)
        .map(|(input, outcome)| Individual {
            input: *input,
            objectives: cfg.mask(outcome.objectives()),
            outcome,
            rank: 0,
            crowding: 0.0,
        })
        .collect()
}

fn objectives_of<O>(pop: &[Individual<O>]) -> Vec<Objectives> {
    pop.iter().map(|i| i.objectives).collect()
}

fn assign_rank_and_crowding<O>(pop: &mut [Individual<O>]) {
    let objs = objectives_of(pop);
    for (rank, front) in fast_nondominated_sort(&objs).iter().enumerate() {
        let crowd = crowding_distance(&objs, front);
        for (&i, d) in front.iter().zip(crowd) {
            pop[i].rank = rank;
            pop[i].crowding = d;
        }
    }
}

/// (mu + lambda) truncation: whole fronts while they fit, then the most
/// spread-out members of the first front that does not.
fn environmental_selection<O: Clone>(combined: Vec<Individual<O>>, size: usize) -> Vec<Individual<O>> {
    let objs = objectives_of(&combined);
    let mut keep: Vec<usize> = Vec::with_capacity(size);
    for front in fast_nondominated_sort(&objs) {
        if keep.len() + front.len() <= size {
            keep.extend(&front);
        } else {
            let crowd = crowding_distance(&objs, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| crowd[b].total_cmp(&crowd[a]).then(a.cmp(&b)));
            keep.extend(order.iter().take(size - keep.len()).map(|&k| front[k]));
        }
        if keep.len() == size {
            break;
        }
    }
    keep.sort_unstable();
    let mut next: Vec<Individual<O>> = keep.into_iter().map(|i| combined[i].clone()).collect();
    assign_rank_and_crowding(&mut next);
    next
}

fn front_of<O: Clone>(pop: &[Individual<O>]) -> Vec<Individual<O>> {
    nondominated_indices(&objectives_of(pop))
        .into_iter()
        .map(|i| pop[i].clone())
        .collect()
}

fn snapshot<O>(generation: usize, evaluations: usize, pop: &[Individual<O>]) -> GenerationSnapshot {
    let objs = objectives_of(pop);
    let front = nondominated_indices(&objs)
        .into_iter()
        .map(|i| FrontMember {
            input: pop[i].input,
            objectives: objs[i],
        })
        .collect();
    GenerationSnapshot {
        generation,
        evaluations,
        front,
    }
}
