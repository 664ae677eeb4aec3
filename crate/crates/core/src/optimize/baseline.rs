//! Reference tilt schemes: no uptilted sectors at all, one random draw, and
//! the best common angle.

use super::problem::{
    angle_lattice, random_vector, Evaluator, OptimizerReport, Scheme, TiltProblem, TiltVector,
};
use crate::network::dt_only_sir;
use crate::propagation::linear_to_db;
use crate::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-point association and SIR when the network has no uptilted sectors:
/// every receiver is served and interfered by downtilted sectors only.
/// Coordinated slots have no meaningful counterpart — muting the downtilted
/// sectors would mute the signal too — so this field carries a single SIR.
#[derive(Debug, Clone, PartialEq)]
pub struct DtOnlyField {
    pub serving: Vec<usize>,
    /// SIR per point, dB; +inf when the layout has a single site.
    pub sir_db: Vec<f64>,
}

/// Evaluates the downtilt-only network on the problem's grid.
pub fn baseline_dt_only(problem: &TiltProblem) -> Result<DtOnlyField> {
    // The uptilt angles are irrelevant; the matrix's uptilt entries are
    // ignored by the downtilt-only association and SIR.
    let placeholder = vec![problem.bounds().clamp(45.0); problem.n_sites()];
    let pm = problem.power_matrix(&placeholder)?;
    let (serving, sir) = dt_only_sir(&pm);
    Ok(DtOnlyField {
        serving,
        sir_db: sir.into_iter().map(linear_to_db).collect(),
    })
}

/// One uniform random tilt vector, evaluated once.
pub fn baseline_random(problem: &TiltProblem, seed: u64) -> Result<OptimizerReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = random_vector(&mut rng, problem.bounds(), problem.n_sites());
    let mut ev = Evaluator::new(problem);
    let f = ev.eval(&draw);
    Ok(OptimizerReport {
        scheme: Scheme::Random,
        seed,
        best_tilts: TiltVector(problem.snap_vec(&draw)),
        best_objective_db: f,
        objective_trace: vec![f],
        evaluations: ev.evaluations(),
    })
}

/// Sweeps one common uptilt angle for all sites over the bounds in
/// `grid_step_deg` increments (the upper bound is always included) and
/// keeps the best. Deterministic; ties prefer the smaller angle.
pub fn baseline_single(problem: &TiltProblem, grid_step_deg: f64) -> Result<OptimizerReport> {
    if !grid_step_deg.is_finite() || grid_step_deg <= 0.0 {
        return Err(Error::param("grid_step_deg", "must be positive"));
    }
    let bounds = problem.bounds();
    let angles = angle_lattice(bounds.min_deg, bounds.max_deg, grid_step_deg);
    let candidates: Vec<Vec<f64>> = angles
        .iter()
        .map(|&a| vec![a; problem.n_sites()])
        .collect();
    let mut ev = Evaluator::new(problem);
    let fitness = ev.eval_batch(&candidates);

    let mut best = 0usize;
    let mut trace = Vec::with_capacity(fitness.len());
    for (i, &f) in fitness.iter().enumerate() {
        if f > fitness[best] {
            best = i;
        }
        trace.push(fitness[best]);
    }
    Ok(OptimizerReport {
        scheme: Scheme::Single,
        seed: 0,
        best_tilts: TiltVector(problem.snap_vec(&candidates[best])),
        best_objective_db: fitness[best],
        objective_trace: trace,
        evaluations: ev.evaluations(),
    })
}
