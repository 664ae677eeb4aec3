//! Genetic algorithm over per-site uptilt angles, plus the hybrid variant
//! that refines the GA winner coordinate-wise.

use super::local_search::{ls_core, LocalSearchParams};
use super::problem::{random_vector, Evaluator, OptimizerReport, Scheme, TiltProblem, TiltVector};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Genetic-algorithm settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    /// Per-gene probability of resampling during mutation.
    pub mutation_prob: f64,
    /// Top candidates copied unchanged into the next generation.
    pub elite_count: usize,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population: 200,
            generations: 100,
            mutation_prob: 0.1,
            elite_count: 2,
            seed: 0,
        }
    }
}

impl GaParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::param("population", "must be at least 2"));
        }
        if !self.mutation_prob.is_finite() || !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::param("mutation_prob", "must lie in [0, 1]"));
        }
        if self.elite_count >= self.population {
            return Err(Error::param(
                "elite_count",
                "must be smaller than the population",
            ));
        }
        Ok(())
    }
}

/// Roulette-wheel sampler over fitness values in dB. Weights are the
/// fitness shifted to be strictly positive: w = f - min + eps with
/// eps = 1e-6 * (max - min + 1), which preserves ordering even when every
/// fitness is negative.
struct Roulette {
    cumulative: Vec<f64>,
    total: f64,
}

impl Roulette {
    fn new(fitness: &[f64]) -> Self {
        let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
        let max = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let eps = 1e-6 * (max - min + 1.0);
        let mut cumulative = Vec::with_capacity(fitness.len());
        let mut total = 0.0;
        for &f in fitness {
            total += f - min + eps;
            cumulative.push(total);
        }
        Roulette { cumulative, total }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        let u = rng.gen::<f64>() * self.total;
        self.cumulative
            .iter()
            .position(|&c| c > u)
            .unwrap_or(self.cumulative.len() - 1)
    }
}

/// Single-point crossover; the cut point is uniform over the interior.
/// Vectors of length one are copied unchanged.
fn crossover(p1: &[f64], p2: &[f64], rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
    let n = p1.len();
    if n < 2 {
        return (p1.to_vec(), p2.to_vec());
    }
    let point = rng.gen_range(1..n);
    let mut c1 = p1[..point].to_vec();
    c1.extend_from_slice(&p2[point..]);
    let mut c2 = p2[..point].to_vec();
    c2.extend_from_slice(&p1[point..]);
    (c1, c2)
}

/// Per-gene mutation: each gene independently resampled uniformly in
/// bounds with probability `prob`.
fn mutate(child: &mut [f64], prob: f64, rng: &mut impl Rng, problem: &TiltProblem) {
    let b = problem.bounds();
    for gene in child.iter_mut() {
        if rng.gen::<f64>() < prob {
            *gene = rng.gen_range(b.min_deg..=b.max_deg);
        }
    }
}

/// Indices of the `k` fittest candidates, ties broken toward lower index.
fn elite_indices(fitness: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..fitness.len()).collect();
    idx.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// The GA loop; returns (best vector, best objective, per-generation trace).
pub(crate) fn ga_core(
    ev: &mut Evaluator<'_>,
    params: &GaParams,
) -> (Vec<f64>, f64, Vec<f64>) {
    let problem = ev.problem();
    let n = problem.n_sites();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let mut population: Vec<Vec<f64>> = (0..params.population)
        .map(|_| random_vector(&mut rng, problem.bounds(), n))
        .collect();
    let mut fitness = ev.eval_batch(&population);

    let mut best_idx = arg_best(&fitness);
    let mut best = problem.snap_vec(&population[best_idx]);
    let mut best_f = fitness[best_idx];
    let mut trace = vec![best_f];

    for _ in 0..params.generations {
        let mut next: Vec<Vec<f64>> = elite_indices(&fitness, params.elite_count)
            .into_iter()
            .map(|i| population[i].clone())
            .collect();
        let wheel = Roulette::new(&fitness);
        while next.len() < params.population {
            let p1 = &population[wheel.draw(&mut rng)];
            let p2 = &population[wheel.draw(&mut rng)];
            let (mut c1, mut c2) = crossover(p1, p2, &mut rng);
            mutate(&mut c1, params.mutation_prob, &mut rng, problem);
            mutate(&mut c2, params.mutation_prob, &mut rng, problem);
            next.push(c1);
            if next.len() < params.population {
                next.push(c2);
            }
        }
        population = next;
        fitness = ev.eval_batch(&population);
        best_idx = arg_best(&fitness);
        if fitness[best_idx] > best_f {
            best_f = fitness[best_idx];
            best = problem.snap_vec(&population[best_idx]);
        }
        trace.push(best_f);
    }
    (best, best_f, trace)
}

fn arg_best(fitness: &[f64]) -> usize {
    let mut best = 0;
    for (i, &f) in fitness.iter().enumerate().skip(1) {
        if f > fitness[best] {
            best = i;
        }
    }
    best
}

/// Runs the genetic algorithm alone.
pub fn ga_optimize(problem: &TiltProblem, params: &GaParams) -> Result<OptimizerReport> {
    params.validate()?;
    let mut ev = Evaluator::new(problem);
    let (best, best_f, trace) = ga_core(&mut ev, params);
    Ok(OptimizerReport {
        scheme: Scheme::Ga,
        seed: params.seed,
        best_tilts: TiltVector(best),
        best_objective_db: best_f,
        objective_trace: trace,
        evaluations: ev.evaluations(),
    })
}

/// Runs the genetic algorithm, then refines its winner coordinate-wise.
/// For the same GA seed the result never scores below the plain GA.
pub fn hybrid_ga(
    problem: &TiltProblem,
    ga_params: &GaParams,
    ls_params: &LocalSearchParams,
) -> Result<OptimizerReport> {
    ga_params.validate()?;
    ls_params.validate()?;
    let mut ev = Evaluator::new(problem);
    let (ga_best, _, mut trace) = ga_core(&mut ev, ga_params);
    let (best, best_f, ls_trace) = ls_core(&mut ev, &ga_best, ls_params);
    trace.extend_from_slice(&ls_trace[1..]);
    Ok(OptimizerReport {
        scheme: Scheme::HybridGa,
        seed: ga_params.seed,
        best_tilts: TiltVector(best),
        best_objective_db: best_f,
        objective_trace: trace,
        evaluations: ev.evaluations(),
    })
}
