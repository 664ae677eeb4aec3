//! Executes schemes against a scenario and assembles exportable artifacts.
//!
//! Every run follows the same shape: choose uptilt angles (per scheme),
//! evaluate the network at those angles for both slot types, and reduce the
//! result to per-point SIR tables, rate statistics, and empirical CDFs. The
//! coordinated-slot evaluation reuses the angles chosen under uncoordinated
//! conditions: tilts are optimized once, for the harder slot type.

use anyhow::{anyhow, bail, Result};
use uptilt_core::geometry::{build_receiver_grid, SiteLayout};
use uptilt_core::network::{
    build_sir_field, compute_power_matrix, ecdf, gue_sir, gue_spectral_efficiency, rate_metrics,
    spectral_efficiency,
};
use uptilt_core::optimize::{
    baseline_dt_only, baseline_random, baseline_single, brute_force_oracle, ga_optimize,
    hybrid_ga, pso_optimize, GaParams, LocalSearchParams, OptimizerReport, PsoParams, Scheme,
    TiltProblem,
};
use uptilt_core::propagation::linear_to_db;

use crate::scenario::Scenario;

/// Step used by the common-angle sweep baseline, in degrees.
const SINGLE_SWEEP_STEP_DEG: f64 = 1.0;

/// Identifies the code and inputs that produced an artifact.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub code_version: String,
    /// Set only when the caller provides a reproducible timestamp; wall
    /// clocks would break byte-identical reruns.
    pub timestamp: Option<String>,
}

/// One row of the rate table.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub scheme: String,
    pub slot: &'static str,
    pub min_se: f64,
    pub median_se: f64,
    pub sum_se: f64,
}

/// One empirical CDF, tagged for export.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfTable {
    pub tag: String,
    pub rows: Vec<(f64, f64)>,
}

/// The outcome of one scheme on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRun {
    /// Export tag; equals the scheme name unless a sweep decorates it.
    pub tag: String,
    /// Chosen uptilt angles, one per site; absent for the downtilt-only
    /// reference, which has no uptilted sectors.
    pub tilts: Option<Vec<f64>>,
    /// The optimizer's report, when the scheme ran one.
    pub report: Option<OptimizerReport>,
    /// Serving site per grid point.
    pub serving: Vec<usize>,
    /// Uncoordinated-slot SIR per grid point, dB.
    pub sir_us_db: Vec<f64>,
    /// Coordinated-slot SIR per grid point, dB; absent for downtilt-only.
    pub sir_cs_db: Option<Vec<f64>>,
    /// Rate statistics, one row per slot type.
    pub rate_rows: Vec<RateRow>,
}

/// Everything one invocation produces, ready for export.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifact {
    pub scenario: Scenario,
    pub provenance: Provenance,
    /// Horizontal site coordinates, indexed like tilt vectors.
    pub sites: Vec<(f64, f64)>,
    /// Horizontal grid-point coordinates, indexed like SIR tables.
    pub grid_points: Vec<(f64, f64)>,
    pub runs: Vec<SchemeRun>,
    pub ecdfs: Vec<EcdfTable>,
}

impl RunArtifact {
    fn new(scenario: &Scenario, problem: &TiltProblem) -> Self {
        Self {
            scenario: scenario.clone(),
            provenance: Provenance {
                seed: scenario.seed,
                code_version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: None,
            },
            sites: problem.layout().sites.iter().map(|s| (s.x, s.y)).collect(),
            grid_points: problem
                .grid()
                .points
                .iter()
                .map(|p| (p.x, p.y))
                .collect(),
            runs: Vec::new(),
            ecdfs: Vec::new(),
        }
    }
}

/// Builds the full-size optimization problem a scenario describes.
pub fn build_problem(scenario: &Scenario) -> Result<TiltProblem> {
    let layout = SiteLayout::build(scenario.isd).map_err(|e| anyhow!("isd: {e}"))?;
    let grid = build_receiver_grid(&layout, scenario.grid_spacing, scenario.uav_height)
        .map_err(|e| anyhow!("grid: {e}"))?;
    TiltProblem::new(
        layout,
        grid,
        scenario.phi_dt,
        true,
        scenario.radio_params()?,
        scenario.element_pattern(),
        scenario.array_config(),
        scenario.bounds()?,
        None,
    )
    .map_err(|e| anyhow!("scenario: {e}"))
}

/// Formats a float for a tag: integers lose the fraction ("-6"), others keep
/// their shortest representation ("0.25").
fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn rate_row(tag: &str, slot: &'static str, se: &[f64]) -> Result<RateRow> {
    let m = rate_metrics(se)?;
    Ok(RateRow {
        scheme: tag.to_string(),
        slot,
        min_se: m.min_se,
        median_se: m.median_se,
        sum_se: m.sum_se,
    })
}

fn db_to_linear_vec(db: &[f64]) -> Vec<f64> {
    db.iter().map(|d| 10f64.powf(d / 10.0)).collect()
}

/// Evaluates chosen tilts on the problem's grid and packages the tables.
fn evaluated_run(
    problem: &TiltProblem,
    tag: &str,
    report: OptimizerReport,
) -> Result<(SchemeRun, Vec<EcdfTable>)> {
    let tilts: Vec<f64> = report.best_tilts.to_vec();
    let pm = compute_power_matrix(
        problem.grid(),
        problem.layout(),
        &tilts,
        problem.downtilt_deg(),
        problem.ground_reflection(),
        problem.params(),
        problem.pattern(),
        problem.array(),
    )?;
    let field = build_sir_field(&pm);
    let se_us = spectral_efficiency(&db_to_linear_vec(&field.sir_us_db));
    let se_cs = spectral_efficiency(&db_to_linear_vec(&field.sir_cs_db));
    let rate_rows = vec![
        rate_row(tag, "us", &se_us)?,
        rate_row(tag, "cs", &se_cs)?,
    ];
    let ecdfs = vec![
        EcdfTable {
            tag: format!("us_{tag}"),
            rows: ecdf(&field.sir_us_db)?,
        },
        EcdfTable {
            tag: format!("cs_{tag}"),
            rows: ecdf(&field.sir_cs_db)?,
        },
    ];
    Ok((
        SchemeRun {
            tag: tag.to_string(),
            tilts: Some(tilts),
            report: Some(report),
            serving: field.serving,
            sir_us_db: field.sir_us_db,
            sir_cs_db: Some(field.sir_cs_db),
            rate_rows,
        },
        ecdfs,
    ))
}

/// Runs the downtilt-only reference, which has no uptilted sectors and hence
/// no coordinated-slot table.
fn dt_only_run(problem: &TiltProblem) -> Result<(SchemeRun, Vec<EcdfTable>)> {
    let field = baseline_dt_only(problem)?;
    let se = spectral_efficiency(&db_to_linear_vec(&field.sir_db));
    let tag = Scheme::DtOnly.name();
    Ok((
        SchemeRun {
            tag: tag.to_string(),
            tilts: None,
            report: None,
            serving: field.serving,
            sir_us_db: field.sir_db.clone(),
            sir_cs_db: None,
            rate_rows: vec![rate_row(tag, "all", &se)?],
        },
        vec![EcdfTable {
            tag: format!("sir_{tag}"),
            rows: ecdf(&field.sir_db)?,
        }],
    ))
}

/// Chooses tilts with the named scheme. The oracle is excluded: it only fits
/// the reduced instance served by [`run_oracle`].
fn optimize(problem: &TiltProblem, scheme: Scheme, seed: u64) -> Result<OptimizerReport> {
    let ga = GaParams {
        seed,
        ..GaParams::default()
    };
    let pso = PsoParams {
        seed,
        ..PsoParams::default()
    };
    let ls = LocalSearchParams::default();
    Ok(match scheme {
        Scheme::Random => baseline_random(problem, seed)?,
        Scheme::Single => baseline_single(problem, SINGLE_SWEEP_STEP_DEG)?,
        Scheme::Ga => ga_optimize(problem, &ga)?,
        Scheme::HybridGa => hybrid_ga(problem, &ga, &ls)?,
        Scheme::Pso => pso_optimize(problem, &pso, &ls)?,
        Scheme::DtOnly | Scheme::Oracle => {
            bail!("scheme {scheme} is not an uptilt optimizer for full scenarios")
        }
    })
}

fn append_scheme(
    artifact: &mut RunArtifact,
    problem: &TiltProblem,
    scheme: Scheme,
    seed: u64,
) -> Result<()> {
    let (run, ecdfs) = if scheme == Scheme::DtOnly {
        dt_only_run(problem)?
    } else {
        let report = optimize(problem, scheme, seed)?;
        evaluated_run(problem, scheme.name(), report)?
    };
    artifact.runs.push(run);
    artifact.ecdfs.extend(ecdfs);
    Ok(())
}

/// Runs one scheme end to end on the scenario.
pub fn run_scheme(scenario: &Scenario, scheme: Scheme) -> Result<RunArtifact> {
    if scheme == Scheme::Oracle {
        bail!("the oracle runs on the reduced instance; use run_oracle");
    }
    scenario.validate()?;
    let problem = build_problem(scenario)?;
    let mut artifact = RunArtifact::new(scenario, &problem);
    append_scheme(&mut artifact, &problem, scheme, scenario.seed)?;
    Ok(artifact)
}

/// Runs several schemes on one scenario and merges their tables.
pub fn run_compare(scenario: &Scenario, schemes: &[Scheme]) -> Result<RunArtifact> {
    if schemes.is_empty() {
        bail!("schemes: at least one scheme is required");
    }
    if schemes.contains(&Scheme::Oracle) {
        bail!("the oracle runs on the reduced instance; use run_oracle");
    }
    scenario.validate()?;
    let problem = build_problem(scenario)?;
    let mut artifact = RunArtifact::new(scenario, &problem);
    for &scheme in schemes {
        append_scheme(&mut artifact, &problem, scheme, scenario.seed)?;
    }
    Ok(artifact)
}

/// Reruns the hybrid scheme for each vertical element count and collects the
/// per-count SIR distributions.
pub fn run_nt_sweep(scenario: &Scenario, nt_list: &[usize]) -> Result<RunArtifact> {
    if nt_list.is_empty() {
        bail!("nt: at least one element count is required");
    }
    if let Some(bad) = nt_list.iter().find(|&&nt| nt == 0) {
        bail!("nt: element count must be at least 1 (got {bad})");
    }
    scenario.validate()?;
    let base_problem = build_problem(scenario)?;
    let mut artifact = RunArtifact::new(scenario, &base_problem);
    for &nt in nt_list {
        let sub = Scenario {
            n_elements: nt,
            ..scenario.clone()
        };
        let problem = build_problem(&sub)?;
        let ga = GaParams {
            seed: scenario.seed,
            ..GaParams::default()
        };
        let report = hybrid_ga(&problem, &ga, &LocalSearchParams::default())?;
        let tag = format!("hybrid_ga_nt{nt}");
        let (run, mut ecdfs) = evaluated_run(&problem, &tag, report)?;
        // The sweep's headline tables carry the element count alone.
        for table in &mut ecdfs {
            table.tag = table.tag.replace(&format!("_{tag}"), &format!("_nt{nt}"));
        }
        artifact.runs.push(run);
        artifact.ecdfs.extend(ecdfs);
    }
    Ok(artifact)
}

/// Evaluates ground-user performance across duty cycles and downtilts.
///
/// The uptilt angles are optimized once, on the aerial problem at the
/// scenario downtilt, and held fixed: the duty cycle only rescales ground
/// spectral efficiency, and the downtilt sweep isolates the effect of the
/// ground sectors' steering on the ground users themselves.
pub fn run_gue_sweep(
    scenario: &Scenario,
    beta_list: &[f64],
    phi_dt_list: &[f64],
) -> Result<RunArtifact> {
    if beta_list.is_empty() || phi_dt_list.is_empty() {
        bail!("sweep lists must be non-empty");
    }
    if let Some(bad) = beta_list
        .iter()
        .find(|b| !(b.is_finite() && (0.0..=1.0).contains(*b)))
    {
        bail!("beta: duty cycle must lie in [0, 1] (got {bad})");
    }
    if let Some(bad) = phi_dt_list
        .iter()
        .find(|p| !(p.is_finite() && p.abs() < 90.0))
    {
        bail!("phi_dt: downtilt must lie strictly inside (-90, 90) (got {bad})");
    }
    scenario.validate()?;

    let problem = build_problem(scenario)?;
    let mut artifact = RunArtifact::new(scenario, &problem);
    let ga = GaParams {
        seed: scenario.seed,
        ..GaParams::default()
    };
    let report = hybrid_ga(&problem, &ga, &LocalSearchParams::default())?;
    let tilts: Vec<f64> = report.best_tilts.to_vec();
    let (run, ecdfs) = evaluated_run(&problem, Scheme::HybridGa.name(), report)?;
    artifact.runs.push(run);
    artifact.ecdfs.extend(ecdfs);

    let gue_grid = build_receiver_grid(
        problem.layout(),
        scenario.grid_spacing,
        scenario.gue_height,
    )?;
    let params = scenario.radio_params()?;
    let pattern = scenario.element_pattern();
    let array = scenario.array_config();

    // Duty-cycle sweep at the scenario downtilt: one SIR field, rescaled.
    let sir = gue_sir(
        &gue_grid,
        problem.layout(),
        &tilts,
        scenario.phi_dt,
        true,
        true,
        &params,
        &pattern,
        &array,
    )?;
    for &beta in beta_list {
        let se = gue_spectral_efficiency(&sir, beta)?;
        artifact.ecdfs.push(EcdfTable {
            tag: format!("gue_se_beta{}", fmt_num(beta)),
            rows: ecdf(&se)?,
        });
    }

    // Downtilt sweep: the duty cycle cancels out of SIR entirely.
    for &phi in phi_dt_list {
        let sir = gue_sir(
            &gue_grid,
            problem.layout(),
            &tilts,
            phi,
            true,
            true,
            &params,
            &pattern,
            &array,
        )?;
        let sir_db: Vec<f64> = sir.iter().map(|&s| linear_to_db(s)).collect();
        artifact.ecdfs.push(EcdfTable {
            tag: format!("gue_sir_phi{}", fmt_num(phi)),
            rows: ecdf(&sir_db)?,
        });
    }
    Ok(artifact)
}

/// Exhaustively solves the reduced three-site instance on a quantized tilt
/// lattice and evaluates the optimum like any other scheme.
pub fn run_oracle(scenario: &Scenario, quantum_deg: f64) -> Result<RunArtifact> {
    scenario.validate()?;
    let full = SiteLayout::build(scenario.isd).map_err(|e| anyhow!("isd: {e}"))?;
    let grid = build_receiver_grid(&full, scenario.grid_spacing, scenario.uav_height)
        .map_err(|e| anyhow!("grid: {e}"))?;
    let layout = full.truncated(3);
    let problem = TiltProblem::new(
        layout,
        grid,
        scenario.phi_dt,
        true,
        scenario.radio_params()?,
        scenario.element_pattern(),
        scenario.array_config(),
        scenario.bounds()?,
        Some(quantum_deg),
    )
    .map_err(|e| anyhow!("scenario: {e}"))?;
    let report = brute_force_oracle(&problem, quantum_deg)?;
    let mut artifact = RunArtifact::new(scenario, &problem);
    let (run, ecdfs) = evaluated_run(&problem, Scheme::Oracle.name(), report)?;
    artifact.runs.push(run);
    artifact.ecdfs.extend(ecdfs);
    Ok(artifact)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A scenario small enough for exhaustive-ish testing: a coarse grid
    /// keeps every optimizer call cheap.
    fn tiny(seed: u64) -> Scenario {
        Scenario {
            grid_spacing: 125.0,
            seed,
            ..Scenario::default()
        }
    }

    #[test]
    fn random_scheme_produces_complete_tables() {
        let artifact = run_scheme(&tiny(3), Scheme::Random).unwrap();
        assert_eq!(artifact.runs.len(), 1);
        let run = &artifact.runs[0];
        assert_eq!(run.tag, "random");
        assert_eq!(run.tilts.as_ref().unwrap().len(), 19);
        assert_eq!(run.sir_us_db.len(), artifact.grid_points.len());
        assert_eq!(
            run.sir_cs_db.as_ref().unwrap().len(),
            artifact.grid_points.len()
        );
        assert_eq!(run.rate_rows.len(), 2);
        assert_eq!(run.rate_rows[0].slot, "us");
        assert_eq!(run.rate_rows[1].slot, "cs");
        // Muting ground sectors in coordinated slots can only help.
        let (us, cs) = (&run.rate_rows[0], &run.rate_rows[1]);
        assert!(cs.min_se >= us.min_se);
        assert!(cs.median_se >= us.median_se);
        assert!(cs.sum_se >= us.sum_se);
        assert_eq!(artifact.ecdfs.len(), 2);
    }

    #[test]
    fn dt_only_has_no_coordinated_tables() {
        let artifact = run_scheme(&tiny(0), Scheme::DtOnly).unwrap();
        let run = &artifact.runs[0];
        assert!(run.tilts.is_none());
        assert!(run.sir_cs_db.is_none());
        assert_eq!(run.rate_rows.len(), 1);
        assert_eq!(run.rate_rows[0].slot, "all");
    }

    #[test]
    fn fixed_seed_reruns_are_identical() {
        let a = run_scheme(&tiny(9), Scheme::Ga).unwrap();
        let b = run_scheme(&tiny(9), Scheme::Ga).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn compare_merges_all_schemes() {
        let schemes = [Scheme::DtOnly, Scheme::Random, Scheme::Single];
        let artifact = run_compare(&tiny(1), &schemes).unwrap();
        assert_eq!(artifact.runs.len(), 3);
        let tags: Vec<&str> = artifact.runs.iter().map(|r| r.tag.as_str()).collect();
        assert_eq!(tags, vec!["dt_only", "random", "single"]);
        // dt_only: 1 rate row; others: 2 each.
        let rows: usize = artifact.runs.iter().map(|r| r.rate_rows.len()).sum();
        assert_eq!(rows, 5);
    }

    #[test]
    fn oracle_is_rejected_outside_its_subcommand() {
        assert!(run_scheme(&tiny(0), Scheme::Oracle).is_err());
        assert!(run_compare(&tiny(0), &[Scheme::Random, Scheme::Oracle]).is_err());
    }

    #[test]
    fn nt_sweep_tags_runs_by_element_count() {
        let scenario = Scenario {
            grid_spacing: 200.0,
            ..Scenario::default()
        };
        // A deliberately small sweep: the hybrid run dominates the cost.
        let artifact = run_nt_sweep(&scenario, &[2]).unwrap();
        assert_eq!(artifact.runs[0].tag, "hybrid_ga_nt2");
        let tags: Vec<&str> = artifact.ecdfs.iter().map(|t| t.tag.as_str()).collect();
        assert_eq!(tags, vec!["us_nt2", "cs_nt2"]);
        assert!(run_nt_sweep(&scenario, &[]).is_err());
        assert!(run_nt_sweep(&scenario, &[0]).is_err());
    }

    #[test]
    fn gue_sweep_produces_one_table_per_setting() {
        let scenario = Scenario {
            grid_spacing: 200.0,
            ..Scenario::default()
        };
        let artifact = run_gue_sweep(&scenario, &[0.25, 0.5], &[0.0, -6.0]).unwrap();
        // One aerial hybrid run plus its two CDFs, then the ground tables.
        assert_eq!(artifact.runs.len(), 1);
        assert_eq!(artifact.runs[0].tag, "hybrid_ga");
        let tags: Vec<&str> = artifact.ecdfs.iter().map(|t| t.tag.as_str()).collect();
        assert_eq!(
            tags,
            vec![
                "us_hybrid_ga",
                "cs_hybrid_ga",
                "gue_se_beta0.25",
                "gue_se_beta0.5",
                "gue_sir_phi0",
                "gue_sir_phi-6",
            ]
        );
        // Halving the duty cycle halves ground spectral efficiency, so the
        // two curves share probabilities with exactly doubled values.
        let quarter = &artifact.ecdfs[2].rows;
        let half = &artifact.ecdfs[3].rows;
        assert_eq!(quarter.len(), half.len());
        for ((v25, p25), (v50, p50)) in quarter.iter().zip(half) {
            assert_eq!(p25, p50);
            assert!((v50 - 2.0 * v25).abs() <= 1e-12 * v50.abs().max(1.0));
        }
        assert!(run_gue_sweep(&scenario, &[], &[0.0]).is_err());
        assert!(run_gue_sweep(&scenario, &[1.5], &[0.0]).is_err());
        assert!(run_gue_sweep(&scenario, &[0.5], &[95.0]).is_err());
    }

    #[test]
    fn oracle_runs_the_reduced_instance() {
        let scenario = Scenario {
            grid_spacing: 150.0,
            uav_height: 150.0,
            ..Scenario::default()
        };
        let artifact = run_oracle(&scenario, 42.0).unwrap();
        assert_eq!(artifact.sites.len(), 3);
        let run = &artifact.runs[0];
        assert_eq!(run.tag, "oracle");
        assert_eq!(run.tilts.as_ref().unwrap().len(), 3);
        // Lattice {5, 47, 89} per site.
        assert_eq!(run.report.as_ref().unwrap().evaluations, 27);
    }
}
