//! Objective definition and the shared evaluation machinery.
//!
//! [`TiltProblem`] freezes everything about a scenario except the uptilt
//! angles and precomputes the tilt-independent parts of every link: the full
//! downtilted-sector powers and, for each uptilted link, the elevation sine
//! and the gain-independent power coefficient. Evaluating a candidate then
//! costs one array-factor evaluation per (point, site) pair, which is what
//! makes population-based search affordable.

use crate::antenna::{array_factor_pow, element_gain_db, ArrayConfig, ElementPattern};
use crate::geometry::{ReceiverGrid, SiteLayout};
use crate::network::{compute_power_matrix, PowerMatrix};
use crate::propagation::{
    link_geometry, pathloss_exponent, rx_power_dt, RadioParams, DT_SECTOR_HEIGHT_M,
    UT_SECTOR_HEIGHT_M,
};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

// ── Tilt domain ─────────────────────────────────────────────────────────────

/// Closed interval of admissible uptilt angles, degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltBounds {
    pub min_deg: f64,
    pub max_deg: f64,
}

impl TiltBounds {
    pub fn new(min_deg: f64, max_deg: f64) -> Result<Self> {
        let b = TiltBounds { min_deg, max_deg };
        b.validate()?;
        Ok(b)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !self.min_deg.is_finite() || !self.max_deg.is_finite() || self.min_deg >= self.max_deg {
            return Err(Error::param(
                "tilt_bounds",
                format!("need finite min < max, got [{}, {}]", self.min_deg, self.max_deg),
            ));
        }
        if self.min_deg < -90.0 || self.max_deg > 90.0 {
            return Err(Error::param(
                "tilt_bounds",
                "steering angles must stay within [-90, 90] degrees",
            ));
        }
        Ok(())
    }

    pub fn contains(&self, angle_deg: f64) -> bool {
        (self.min_deg..=self.max_deg).contains(&angle_deg)
    }

    pub fn clamp(&self, angle_deg: f64) -> f64 {
        angle_deg.clamp(self.min_deg, self.max_deg)
    }

    pub fn span(&self) -> f64 {
        self.max_deg - self.min_deg
    }
}

impl Default for TiltBounds {
    fn default() -> Self {
        TiltBounds {
            min_deg: 5.0,
            max_deg: 89.0,
        }
    }
}

/// One uptilt angle per site, degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltVector(pub Vec<f64>);

impl TiltVector {
    pub fn uniform(n: usize, angle_deg: f64) -> Self {
        TiltVector(vec![angle_deg; n])
    }
}

impl std::ops::Deref for TiltVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

// ── Schemes and reports ─────────────────────────────────────────────────────

/// Tilt-determination schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    DtOnly,
    Random,
    Single,
    Ga,
    HybridGa,
    Pso,
    Oracle,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::DtOnly,
        Scheme::Random,
        Scheme::Single,
        Scheme::Ga,
        Scheme::HybridGa,
        Scheme::Pso,
        Scheme::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DtOnly => "dt_only",
            Scheme::Random => "random",
            Scheme::Single => "single",
            Scheme::Ga => "ga",
            Scheme::HybridGa => "hybrid_ga",
            Scheme::Pso => "pso",
            Scheme::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.name() == s)
            .ok_or_else(|| {
                Error::param(
                    "scheme",
                    format!(
                        "unknown scheme '{s}'; expected one of {}",
                        Scheme::ALL.map(Scheme::name).join(", ")
                    ),
                )
            })
    }
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerReport {
    pub scheme: Scheme,
    pub seed: u64,
    pub best_tilts: TiltVector,
    /// Worst-case uncoordinated-slot SIR achieved, dB.
    pub best_objective_db: f64,
    /// Best objective seen so far, one entry per generation/iteration/pass
    /// (non-decreasing for the population schemes).
    pub objective_trace: Vec<f64>,
    /// Distinct objective evaluations performed.
    pub evaluations: u64,
}

// ── Problem instance ────────────────────────────────────────────────────────

/// Tilt-independent link precomputation: full downtilted powers plus, per
/// uptilted link, the elevation sine and the power with the array factor
/// divided out.
struct LinkCache {
    n_sites: usize,
    n_points: usize,
    dt_power: Vec<f64>,
    ut_coeff: Vec<f64>,
    ut_sin_theta: Vec<f64>,
}

/// A frozen scenario whose only free variables are the per-site uptilt
/// angles.
pub struct TiltProblem {
    layout: SiteLayout,
    grid: ReceiverGrid,
    downtilt_deg: f64,
    ground_reflection: bool,
    params: RadioParams,
    pattern: ElementPattern,
    array: ArrayConfig,
    bounds: TiltBounds,
    /// When set, every evaluated candidate is snapped to the angle lattice
    /// `{min + k·q} ∪ {max}`; used to compare heuristics against the
    /// exhaustive oracle on equal footing.
    quantum_deg: Option<f64>,
    lattice: Option<Vec<f64>>,
    cache: LinkCache,
}

/// Angle lattice `{min + k·step | min + k·step ≤ max} ∪ {max}`, ascending.
pub(crate) fn angle_lattice(min_deg: f64, max_deg: f64, step_deg: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let v = min_deg + f64::from(k) * step_deg;
        if v > max_deg {
            break;
        }
        out.push(v);
        k += 1;
    }
    if *out.last().expect("lattice holds at least min") < max_deg {
        out.push(max_deg);
    }
    out
}

impl TiltProblem {
    /// Freezes a scenario and precomputes its link cache.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        layout: SiteLayout,
        grid: ReceiverGrid,
        downtilt_deg: f64,
        ground_reflection: bool,
        params: RadioParams,
        pattern: ElementPattern,
        array: ArrayConfig,
        bounds: TiltBounds,
        quantum_deg: Option<f64>,
    ) -> Result<Self> {
        bounds.validate()?;
        if grid.points.is_empty() {
            return Err(Error::EmptyField("receiver grid"));
        }
        if !downtilt_deg.is_finite() || downtilt_deg.abs() > 90.0 {
            return Err(Error::param(
                "downtilt_deg",
                "must be a finite steering angle within [-90, 90]",
            ));
        }
        if let Some(q) = quantum_deg {
            if !q.is_finite() || q <= 0.0 || q > bounds.span() {
                return Err(Error::param(
                    "quantum_deg",
                    format!("must lie in (0, {}], got {q}", bounds.span()),
                ));
            }
        }
        let lattice = quantum_deg.map(|q| angle_lattice(bounds.min_deg, bounds.max_deg, q));

        let n_sites = layout.sites.len();
        let n_points = grid.points.len();
        let friis = {
            let x = params.wavelength_m / (4.0 * PI);
            x * x
        };
        let alpha = pathloss_exponent(grid.height, DT_SECTOR_HEIGHT_M, params.alpha0);

        let mut dt_power = Vec::with_capacity(n_points * n_sites);
        let mut ut_coeff = Vec::with_capacity(n_points * n_sites);
        let mut ut_sin_theta = Vec::with_capacity(n_points * n_sites);
        for &p in &grid.points {
            for b in 0..n_sites {
                let disp = layout.effective_displacement(b, p);
                dt_power.push(rx_power_dt(
                    disp,
                    grid.height,
                    downtilt_deg,
                    ground_reflection,
                    &params,
                    &pattern,
                    &array,
                )?);
                let geom = link_geometry(disp, UT_SECTOR_HEIGHT_M, grid.height);
                if geom.dist_3d == 0.0 {
                    return Err(Error::InvalidGeometry(
                        "grid point coincides with an uptilted sector antenna".into(),
                    ));
                }
                let g_elem_lin =
                    10f64.powf(element_gain_db(geom.elevation_rad.to_degrees(), &pattern)? / 10.0);
                ut_coeff
                    .push(params.tx_power_w * friis * g_elem_lin / geom.dist_3d.powf(alpha));
                ut_sin_theta.push(geom.elevation_rad.sin());
            }
        }

        Ok(TiltProblem {
            layout,
            grid,
            downtilt_deg,
            ground_reflection,
            params,
            pattern,
            array,
            bounds,
            quantum_deg,
            lattice,
            cache: LinkCache {
                n_sites,
                n_points,
                dt_power,
                ut_coeff,
                ut_sin_theta,
            },
        })
    }

    pub fn layout(&self) -> &SiteLayout {
        &self.layout
    }

    pub fn grid(&self) -> &ReceiverGrid {
        &self.grid
    }

    pub fn params(&self) -> &RadioParams {
        &self.params
    }

    pub fn pattern(&self) -> &ElementPattern {
        &self.pattern
    }

    pub fn array(&self) -> &ArrayConfig {
        &self.array
    }

    pub fn downtilt_deg(&self) -> f64 {
        self.downtilt_deg
    }

    pub fn ground_reflection(&self) -> bool {
        self.ground_reflection
    }

    pub fn bounds(&self) -> TiltBounds {
        self.bounds
    }

    pub fn quantum_deg(&self) -> Option<f64> {
        self.quantum_deg
    }

    pub fn n_sites(&self) -> usize {
        self.cache.n_sites
    }

    /// Clamps every angle into bounds and, on quantized instances, snaps it
    /// to the nearest lattice value (ties toward the smaller angle).
    pub fn snap_vec(&self, tilts_deg: &[f64]) -> Vec<f64> {
        tilts_deg
            .iter()
            .map(|&t| {
                let t = self.bounds.clamp(t);
                match &self.lattice {
                    None => t,
                    Some(lat) => {
                        let mut best = lat[0];
                        let mut best_d = (t - lat[0]).abs();
                        for &v in &lat[1..] {
                            let d = (t - v).abs();
                            if d < best_d {
                                best = v;
                                best_d = d;
                            }
                        }
                        best
                    }
                }
            })
            .collect()
    }

    /// The full power matrix for one tilt vector, via the straight per-link
    /// pipeline (used for reporting; the optimizers use the cached path).
    pub fn power_matrix(&self, uptilts_deg: &[f64]) -> Result<PowerMatrix> {
        compute_power_matrix(
            &self.grid,
            &self.layout,
            uptilts_deg,
            self.downtilt_deg,
            self.ground_reflection,
            &self.params,
            &self.pattern,
            &self.array,
        )
    }

    /// Fast-path objective; assumes `tilts_deg` has the right length. Angles
    /// are used exactly as given.
    pub(crate) fn objective_unchecked(&self, tilts_deg: &[f64]) -> f64 {
        let c = &self.cache;
        debug_assert_eq!(tilts_deg.len(), c.n_sites);
        let sin_phi: Vec<f64> = tilts_deg.iter().map(|t| t.to_radians().sin()).collect();
        let mut ut = vec![0.0; c.n_sites];
        let mut min_sir = f64::INFINITY;
        for u in 0..c.n_points {
            let row = u * c.n_sites;
            for b in 0..c.n_sites {
                ut[b] = c.ut_coeff[row + b]
                    * array_factor_pow(c.ut_sin_theta[row + b], sin_phi[b], self.array.n_elements);
            }
            let mut serving = 0usize;
            let mut best = f64::NEG_INFINITY;
            for b in 0..c.n_sites {
                let composite = ut[b].max(c.dt_power[row + b]);
                if composite > best {
                    best = composite;
                    serving = b;
                }
            }
            let mut denom = 0.0;
            for b in 0..c.n_sites {
                if b == serving {
                    denom += c.dt_power[row + b];
                } else {
                    denom += ut[b] + c.dt_power[row + b];
                }
            }
            let sir = ut[serving] / denom;
            if sir < min_sir {
                min_sir = sir;
            }
        }
        10.0 * min_sir.log10()
    }
}

/// Worst-case uncoordinated-slot SIR over the grid in dB for one tilt
/// vector. Errors on a length mismatch or an out-of-bounds angle.
pub fn objective_db(problem: &TiltProblem, tilts_deg: &[f64]) -> Result<f64> {
    if tilts_deg.len() != problem.n_sites() {
        return Err(Error::param(
            "tilts_deg",
            format!(
                "expected {} entries, got {}",
                problem.n_sites(),
                tilts_deg.len()
            ),
        ));
    }
    for (i, &t) in tilts_deg.iter().enumerate() {
        if !t.is_finite() || !problem.bounds().contains(t) {
            return Err(Error::param(
                "tilts_deg",
                format!(
                    "entry {i} = {t} outside bounds [{}, {}]",
                    problem.bounds().min_deg,
                    problem.bounds().max_deg
                ),
            ));
        }
    }
    Ok(problem.objective_unchecked(tilts_deg))
}

// ── Memoizing evaluator ─────────────────────────────────────────────────────

/// Memoizing objective evaluator used by every search scheme. Candidates are
/// snapped via [`TiltProblem::snap_vec`] before evaluation; repeated
/// candidates cost nothing, and batches evaluate their distinct members in
/// parallel without affecting results.
pub struct Evaluator<'p> {
    problem: &'p TiltProblem,
    cache: HashMap<Box<[u64]>, f64>,
    evaluations: u64,
}

fn cache_key(tilts: &[f64]) -> Box<[u64]> {
    tilts.iter().map(|t| t.to_bits()).collect()
}

impl<'p> Evaluator<'p> {
    pub fn new(problem: &'p TiltProblem) -> Self {
        Evaluator {
            problem,
            cache: HashMap::new(),
            evaluations: 0,
        }
    }

    pub fn problem(&self) -> &'p TiltProblem {
        self.problem
    }

    /// Distinct objective evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// Objective of one candidate (snapped), memoized.
    pub fn eval(&mut self, tilts_deg: &[f64]) -> f64 {
        let snapped = self.problem.snap_vec(tilts_deg);
        let key = cache_key(&snapped);
        if let Some(&f) = self.cache.get(&key) {
            return f;
        }
        let f = self.problem.objective_unchecked(&snapped);
        self.cache.insert(key, f);
        self.evaluations += 1;
        f
    }

    /// Objectives of a batch of candidates. Uncached distinct members are
    /// evaluated in parallel; the result order and values are independent of
    /// the thread count.
    pub fn eval_batch(&mut self, candidates: &[Vec<f64>]) -> Vec<f64> {
        let snapped: Vec<Vec<f64>> = candidates
            .iter()
            .map(|c| self.problem.snap_vec(c))
            .collect();
        let mut pending: Vec<(Box<[u64]>, &Vec<f64>)> = Vec::new();
        let mut seen: HashSet<Box<[u64]>> = HashSet::new();
        for s in &snapped {
            let key = cache_key(s);
            if !self.cache.contains_key(&key) && seen.insert(key.clone()) {
                pending.push((key, s));
            }
        }
        let results: Vec<f64> = pending
            .par_iter()
            .map(|(_, v)| self.problem.objective_unchecked(v))
            .collect();
        self.evaluations += pending.len() as u64;
        for ((key, _), f) in pending.into_iter().zip(results) {
            self.cache.insert(key, f);
        }
        snapped
            .iter()
            .map(|s| self.cache[&cache_key(s)])
            .collect()
    }
}

/// Uniform random tilt vector within bounds (not snapped; snapping happens
/// at evaluation time).
pub(crate) fn random_vector(
    rng: &mut impl rand::Rng,
    bounds: TiltBounds,
    n: usize,
) -> Vec<f64> {
    (0..n)
        .map(|_| rng.gen_range(bounds.min_deg..=bounds.max_deg))
        .collect()
}
