//! Multi-objective search over the test-input space.
//!
//! [`nsga2_run`] is a generational NSGA-II with binary tournament selection,
//! simulated binary crossover, Gaussian mutation with end-point cutoffs and
//! (mu + lambda) survivor selection. [`random_search_run`] samples the same
//! budget uniformly and serves as the baseline.

mod nsga2;
mod operators;
mod sorting;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::fitness::ScenarioOutcome;
use crate::scene::{InputSpace, TestInput, GENE_COUNT};
use crate::{Error, Result};

pub use nsga2::{nsga2_run, nsga2_run_until, random_search_run, Progress};
pub use operators::{binary_tournament, gaussian_mutation, sbx_beta, sbx_crossover};
pub use sorting::{crowding_distance, dominates, fast_nondominated_sort, nondominated_indices};

/// Minimised objective vector (FF1, FF2, FF3).
pub type Objectives = [f64; 3];

pub trait HasObjectives {
    fn objectives(&self) -> Objectives;
}

impl HasObjectives for ScenarioOutcome {
    fn objectives(&self) -> Objectives {
        ScenarioOutcome::objectives(self)
    }
}

impl HasObjectives for Objectives {
    fn objectives(&self) -> Objectives {
        *self
    }
}

/// Turns test inputs into outcomes.
///
/// `id` is the zero-based evaluation index within a run; implementations
/// that need randomness derive it from `id` so that results do not depend on
/// evaluation order. Batches are independent and may be evaluated
/// concurrently by overriding [`Evaluator::evaluate_batch`].
pub trait Evaluator {
    type Outcome: Clone + HasObjectives;

    fn evaluate(&self, input: &TestInput, id: u64) -> Result<Self::Outcome>;

    fn evaluate_batch(&self, inputs: &[TestInput], first_id: u64) -> Result<Vec<Self::Outcome>> {
        inputs
            .iter()
            .enumerate()
            .map(|(i, x)| self.evaluate(x, first_id + i as u64))
            .collect()
    }
}

impl<F, O> Evaluator for F
where
    F: Fn(&TestInput) -> O,
    O: Clone + HasObjectives,
{
    type Outcome = O;

    fn evaluate(&self, input: &TestInput, _id: u64) -> Result<O> {
        Ok(self(input))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// SBX distribution index.
    pub eta: f64,
    /// Mutation standard deviation as a fraction of each gene's range.
    pub sigma_fraction: f64,
    /// Total number of scenario evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Objectives taking part in dominance; disabled ones count as 0.
    pub objective_mask: [bool; 3],
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            population_size: 10,
            crossover_rate: 0.9,
            mutation_rate: 0.5,
            eta: 20.0,
            sigma_fraction: 0.1,
            budget: 300,
            seed: 0,
            objective_mask: [true; 3],
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("crossover rate", self.crossover_rate),
            ("mutation rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::config(alloc::format!("{name} must be in [0, 1], got {r}")));
            }
        }
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(Error::config(alloc::format!(
                "population size must be even and >= 2, got {}",
                self.population_size
            )));
        }
        if !(self.eta >= 0.0) || !(self.sigma_fraction >= 0.0) {
            return Err(Error::config("eta and sigma fraction must be >= 0"));
        }
        if self.budget < self.population_size {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                population: self.population_size,
            });
        }
        Ok(())
    }

    /// Mutation standard deviation per gene.
    pub fn sigmas(&self, space: &InputSpace) -> [f64; GENE_COUNT] {
        space.ranges().map(|r| r.width() * self.sigma_fraction)
    }

    pub fn mask(&self, o: Objectives) -> Objectives {
        let mut out = o;
        for (v, on) in out.iter_mut().zip(self.objective_mask) {
            if !on {
                *v = 0.0;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual<O> {
    pub input: TestInput,
    pub outcome: O,
    /// Objectives after masking.
    pub objectives: Objectives,
    pub rank: usize,
    /// `f64::INFINITY` marks a boundary member.
    pub crowding: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontMember {
    pub input: TestInput,
    pub objectives: Objectives,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSnapshot {
    pub generation: usize,
    pub evaluations: usize,
    pub front: Vec<FrontMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<O> {
    /// The solutions a run reports: the final population for NSGA-II, the
    /// nondominated samples for random search.
    pub final_population: Vec<Individual<O>>,
    /// Nondominated members of the final population.
    pub final_front: Vec<Individual<O>>,
    /// Every evaluated individual, in evaluation order.
    pub evaluated: Vec<Individual<O>>,
    pub generations: Vec<GenerationSnapshot>,
    pub seed: u64,
    pub config: SearchConfig,
}

impl<O> RunResult<O> {
    pub fn evaluations(&self) -> usize {
        self.evaluated.len()
    }
}
