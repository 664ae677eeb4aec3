//! Coordinate-wise local refinement with a halving step schedule.

use super::problem::{Evaluator, OptimizerReport, Scheme, TiltProblem, TiltVector};
use crate::{Error, Result};

/// Step schedule of the coordinate-wise refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalSearchParams {
    /// Starting step, degrees.
    pub step_init_deg: f64,
    /// The search stops once the step falls below this, degrees.
    pub step_min_deg: f64,
    /// Hard cap on coordinate passes; 0 disables refinement entirely.
    pub max_passes: usize,
}

impl Default for LocalSearchParams {
    fn default() -> Self {
        LocalSearchParams {
            step_init_deg: 2.0,
            step_min_deg: 0.1,
            max_passes: 50,
        }
    }
}

impl LocalSearchParams {
    pub(crate) fn validate(&self) -> Result<()> {
        if !self.step_init_deg.is_finite()
            || !self.step_min_deg.is_finite()
            || self.step_min_deg <= 0.0
            || self.step_init_deg < self.step_min_deg
        {
            return Err(Error::param(
                "local_search",
                format!(
                    "need 0 < step_min <= step_init, got init {} min {}",
                    self.step_init_deg, self.step_min_deg
                ),
            ));
        }
        Ok(())
    }
}

/// One pass visits every site in ascending index order and tries +step then
/// -step (clamped to bounds), keeping the first strict improvement. A pass
/// without any improvement halves the step; the search ends when the step
/// drops below `step_min_deg` or after `max_passes` passes. Returns the
/// final vector, its objective, and the best objective after the start and
/// after each pass.
pub(crate) fn ls_core(
    ev: &mut Evaluator<'_>,
    start: &[f64],
    params: &LocalSearchParams,
) -> (Vec<f64>, f64, Vec<f64>) {
    let problem = ev.problem();
    let bounds = problem.bounds();
    let mut cur = problem.snap_vec(start);
    let mut f_cur = ev.eval(&cur);
    let mut trace = vec![f_cur];
    let mut step = params.step_init_deg;
    let mut passes = 0usize;
    while step >= params.step_min_deg && passes < params.max_passes {
        let mut improved = false;
        for site in 0..cur.len() {
            for dir in [1.0, -1.0] {
                let mut cand = cur.clone();
                cand[site] = bounds.clamp(cand[site] + dir * step);
                if cand[site] == cur[site] {
                    continue;
                }
                let f = ev.eval(&cand);
                if f > f_cur {
                    cur = problem.snap_vec(&cand);
                    f_cur = f;
                    improved = true;
                    break;
                }
            }
        }
        passes += 1;
        trace.push(f_cur);
        if !improved {
            step *= 0.5;
        }
    }
    (cur, f_cur, trace)
}

/// Refines a start vector coordinate-wise; the result never scores below
/// the start. Deterministic — involves no randomness.
pub fn local_refine(
    problem: &TiltProblem,
    start: &[f64],
    params: &LocalSearchParams,
) -> Result<OptimizerReport> {
    params.validate()?;
    if start.len() != problem.n_sites() {
        return Err(Error::param(
            "start",
            format!("expected {} entries, got {}", problem.n_sites(), start.len()),
        ));
    }
    for (i, &t) in start.iter().enumerate() {
        if !t.is_finite() || !problem.bounds().contains(t) {
            return Err(Error::param(
                "start",
                format!("entry {i} = {t} outside bounds"),
            ));
        }
    }
    let mut ev = Evaluator::new(problem);
    let (best, best_f, trace) = ls_core(&mut ev, start, params);
    Ok(OptimizerReport {
        scheme: Scheme::HybridGa,
        seed: 0,
        best_tilts: TiltVector(best),
        best_objective_db: best_f,
        objective_trace: trace,
        evaluations: ev.evaluations(),
    })
}
