//! Particle-swarm optimization with a nominal-tilt initialization and a
//! final coordinate-wise refinement of the global best.

use super::local_search::{ls_core, LocalSearchParams};
use super::problem::{Evaluator, OptimizerReport, Scheme, TiltProblem, TiltVector};
use crate::propagation::UT_SECTOR_HEIGHT_M;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Particle-swarm settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoParams {
    pub swarm: usize,
    pub iterations: usize,
    /// Velocity memory weight.
    pub inertia: f64,
    /// Pull toward each particle's personal best.
    pub c1: f64,
    /// Pull toward the global best.
    pub c2: f64,
    /// Per-component velocity cap, degrees per iteration.
    pub v_max_deg: f64,
    pub seed: u64,
}

impl Default for PsoParams {
    fn default() -> Self {
        PsoParams {
            swarm: 200,
            iterations: 100,
            inertia: 0.72,
            c1: 1.45,
            c2: 1.45,
            v_max_deg: 8.0,
            seed: 0,
        }
    }
}

impl PsoParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if self.swarm < 2 {
            return Err(Error::param("swarm", "must be at least 2"));
        }
        if !self.inertia.is_finite() || !(0.0 < self.inertia && self.inertia < 1.0) {
            return Err(Error::param("inertia", "must lie strictly inside (0, 1)"));
        }
        if !self.c1.is_finite() || self.c1 < 0.0 || !self.c2.is_finite() || self.c2 < 0.0 {
            return Err(Error::param("c1/c2", "must be non-negative and finite"));
        }
        if !self.v_max_deg.is_finite() || self.v_max_deg <= 0.0 {
            return Err(Error::param("v_max_deg", "must be positive"));
        }
        Ok(())
    }
}

/// The tilt that points each site's uptilted sector at the center-cell
/// origin at grid altitude, clamped to bounds. The center site itself looks
/// straight up.
pub(crate) fn nominal_tilts(problem: &TiltProblem) -> Vec<f64> {
    let h = problem.grid().height;
    let bounds = problem.bounds();
    problem
        .layout()
        .sites
        .iter()
        .map(|site| {
            let d = site.norm();
            let angle = (h - UT_SECTOR_HEIGHT_M).atan2(d).to_degrees();
            bounds.clamp(angle)
        })
        .collect()
}

/// Runs particle-swarm optimization, then refines the global best
/// coordinate-wise. Deterministic for a fixed seed.
pub fn pso_optimize(
    problem: &TiltProblem,
    params: &PsoParams,
    ls_params: &LocalSearchParams,
) -> Result<OptimizerReport> {
    params.validate()?;
    ls_params.validate()?;
    let n = problem.n_sites();
    let bounds = problem.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut ev = Evaluator::new(problem);

    // Swarm: the nominal solution, then perturbed copies of it.
    let nominal = nominal_tilts(problem);
    let mut positions: Vec<Vec<f64>> = Vec::with_capacity(params.swarm);
    positions.push(nominal.clone());
    for _ in 1..params.swarm {
        positions.push(
            nominal
                .iter()
                .map(|&t| bounds.clamp(t + rng.gen_range(-10.0..=10.0)))
                .collect(),
        );
    }
    // Random upward initial velocities: the nominal start aims every sector
    // into the protected region, which is the most strongly interfering
    // configuration, so the only escape direction is toward higher tilts.
    // During the damped transient each particle sweeps the climb and its
    // personal best records the best crossing, even when the swarm later
    // falls back.
    let mut velocities: Vec<Vec<f64>> = (0..params.swarm)
        .map(|_| {
            (0..n)
                .map(|_| rng.gen_range(0.0..=params.v_max_deg))
                .collect()
        })
        .collect();

    let mut fitness = ev.eval_batch(&positions);
    let mut pbest_pos = positions.clone();
    let mut pbest_f = fitness.clone();
    let mut gbest = arg_best(&pbest_f);
    let mut gbest_pos = pbest_pos[gbest].clone();
    let mut gbest_f = pbest_f[gbest];
    let mut trace = vec![gbest_f];

    for _ in 0..params.iterations {
        // Velocity and position update against the previous iteration's
        // global best (synchronous update).
        for i in 0..params.swarm {
            for d in 0..n {
                let r1 = rng.gen::<f64>();
                let r2 = rng.gen::<f64>();
                let v = params.inertia * velocities[i][d]
                    + params.c1 * r1 * (pbest_pos[i][d] - positions[i][d])
                    + params.c2 * r2 * (gbest_pos[d] - positions[i][d]);
                velocities[i][d] = v.clamp(-params.v_max_deg, params.v_max_deg);
                let raw = positions[i][d] + velocities[i][d];
                positions[i][d] = bounds.clamp(raw);
                // Reflecting walls: a component that hits a bound reverses,
                // so particles whose start lies on a bound (the center
                // site's nominal tilt is the upper bound itself) still
                // explore inward instead of sticking to the wall.
                if raw != positions[i][d] {
                    velocities[i][d] = -velocities[i][d];
                }
                debug_assert!(bounds.contains(positions[i][d]));
            }
        }
        fitness = ev.eval_batch(&positions);
        for i in 0..params.swarm {
            if fitness[i] > pbest_f[i] {
                pbest_f[i] = fitness[i];
                pbest_pos[i] = positions[i].clone();
            }
        }
        for i in 0..params.swarm {
            if pbest_f[i] > gbest_f {
                gbest_f = pbest_f[i];
                gbest = i;
            }
        }
        gbest_pos = pbest_pos[gbest].clone();
        trace.push(gbest_f);
    }

    let (best, best_f, ls_trace) = ls_core(&mut ev, &gbest_pos, ls_params);
    trace.extend_from_slice(&ls_trace[1..]);
    Ok(OptimizerReport {
        scheme: Scheme::Pso,
        seed: params.seed,
        best_tilts: TiltVector(best),
        best_objective_db: best_f,
        objective_trace: trace,
        evaluations: ev.evaluations(),
    })
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
