//! Exhaustive search over a quantized tilt lattice, for verifying the
//! heuristics on small instances.

use super::problem::{
    angle_lattice, Evaluator, OptimizerReport, Scheme, TiltProblem, TiltVector,
};
use crate::{Error, Result};

/// Hard cap on the number of lattice combinations the oracle will evaluate.
pub const ORACLE_COMBINATION_LIMIT: u128 = 10_000_000;

/// Batch size for parallel evaluation; purely a throughput knob.
const BATCH: usize = 1024;

/// Evaluates every combination of lattice angles `{min + k·q} ∪ {max}` at
/// every site and returns the exact maximizer; among ties, the
/// lexicographically smallest vector wins. Refuses instances above
/// [`ORACLE_COMBINATION_LIMIT`] combinations.
pub fn brute_force_oracle(problem: &TiltProblem, quantum_deg: f64) -> Result<OptimizerReport> {
    let bounds = problem.bounds();
    if !quantum_deg.is_finite() || quantum_deg <= 0.0 || quantum_deg > bounds.span() {
        return Err(Error::param(
            "quantum_deg",
            format!("must lie in (0, {}], got {quantum_deg}", bounds.span()),
        ));
    }
    let lattice = angle_lattice(bounds.min_deg, bounds.max_deg, quantum_deg);
    let n = problem.n_sites();

    let mut combinations: u128 = 1;
    for _ in 0..n {
        combinations = combinations.saturating_mul(lattice.len() as u128);
        if combinations > ORACLE_COMBINATION_LIMIT {
            return Err(Error::CombinationOverflow {
                combinations,
                limit: ORACLE_COMBINATION_LIMIT,
            });
        }
    }

    let mut ev = Evaluator::new(problem);
    let mut indices = vec![0usize; n];
    let mut exhausted = false;
    let mut best: Option<(Vec<f64>, f64)> = None;

    while !exhausted {
        // Collect the next batch in lexicographic order.
        let mut batch: Vec<Vec<f64>> = Vec::with_capacity(BATCH);
        while batch.len() < BATCH && !exhausted {
            batch.push(indices.iter().map(|&k| lattice[k]).collect());
            // Odometer increment, last site fastest.
            let mut pos = n;
            loop {
                if pos == 0 {
                    exhausted = true;
                    break;
                }
                pos -= 1;
                indices[pos] += 1;
                if indices[pos] < lattice.len() {
                    break;
                }
                indices[pos] = 0;
            }
        }
        let fitness = ev.eval_batch(&batch);
        for (cand, f) in batch.into_iter().zip(fitness) {
            // Strict improvement keeps the first — lexicographically
            // smallest — maximizer.
            let better = match &best {
                None => true,
                Some((_, best_f)) => f > *best_f,
            };
            if better {
                best = Some((cand, f));
            }
        }
    }

    let (best_tilts, best_f) = best.expect("the lattice is never empty");
    Ok(OptimizerReport {
        scheme: Scheme::Oracle,
        seed: 0,
        best_tilts: TiltVector(best_tilts),
        best_objective_db: best_f,
        objective_trace: vec![best_f],
        evaluations: ev.evaluations(),
    })
}
