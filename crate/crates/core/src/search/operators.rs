use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::Individual;
use crate::scene::{clamp, InputSpace, TestInput, GENE_COUNT};

/// Picks two members uniformly with replacement and returns the index of the
/// better one: lower rank, then larger crowding distance, then a coin flip.
pub fn binary_tournament<O, R: Rng + ?Sized>(population: &[Individual<O>], rng: &mut R) -> usize {
    let n = population.len();
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    if a == b {
        return a;
    }
    let (x, y) = (&population[a], &population[b]);
    if x.rank != y.rank {
        return if x.rank < y.rank { a } else { b };
    }
    if x.crowding > y.crowding {
        return a;
    }
    if y.crowding > x.crowding {
        return b;
    }
    if rng.random_bool(0.5) {
        a
    } else {
        b
    }
}

/// SBX spread factor for a uniform draw `u` in [0, 1).
pub fn sbx_beta(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        libm::pow(2.0 * u, e)
    } else {
        libm::pow(1.0 / (2.0 * (1.0 - u)), e)
    }
}

fn sbx_children(p1: &TestInput, p2: &TestInput, betas: [f64; GENE_COUNT]) -> (TestInput, TestInput) {
    let a = p1.to_array();
    let b = p2.to_array();
    let mut c1 = [0.0; GENE_COUNT];
    let mut c2 = [0.0; GENE_COUNT];
    for i in 0..GENE_COUNT {
        if a[i] == b[i] {
            (c1[i], c2[i]) = (a[i], b[i]);
            continue;
        }
        let beta = betas[i];
        c1[i] = 0.5 * ((1.0 + beta) * a[i] + (1.0 - beta) * b[i]);
        c2[i] = 0.5 * ((1.0 - beta) * a[i] + (1.0 + beta) * b[i]);
    }
    (TestInput::from_array(c1), TestInput::from_array(c2))
}

/// Simulated binary crossover, gene by gene, with children clamped to `space`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &TestInput,
    p2: &TestInput,
    eta: f64,
    space: &InputSpace,
    rng: &mut R,
) -> (TestInput, TestInput) {
    let mut betas = [1.0; GENE_COUNT];
    for b in betas.iter_mut() {
        *b = sbx_beta(rng.random::<f64>(), eta);
    }
    let (c1, c2) = sbx_children(p1, p2, betas);
    (clamp(&c1, space), clamp(&c2, space))
}

/// Shifts each gene with probability `rate` by a draw from N(0, sigma^2),
/// then clamps to `space`.
pub fn gaussian_mutation<R: Rng + ?Sized>(
    child: &TestInput,
    rate: f64,
    sigmas: &[f64; GENE_COUNT],
    space: &InputSpace,
    rng: &mut R,
) -> TestInput {
    let mut genes = child.to_array();
    for (g, &sigma) in genes.iter_mut().zip(sigmas) {
        if rng.random::<f64>() < rate {
            let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
            *g += normal.sample(rng);
        }
    }
    clamp(&TestInput::from_array(genes), space)
}
