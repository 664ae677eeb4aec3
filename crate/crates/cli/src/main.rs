//! Command-line front end for the uptilt simulator.
//!
//! Subcommands map one-to-one onto the run functions in the library:
//! `run` (one scheme), `compare` (several schemes, merged tables),
//! `sweep-nt` (vertical element counts), `sweep-gue` (ground-user duty
//! cycle and downtilt), and `oracle` (exhaustive reduced instance).
//!
//! Exit codes: 0 on success, 1 for configuration errors (flags or config
//! file), 2 for runtime failures. Progress goes to standard error; data goes
//! only to files and standard output.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use uptilt_cli::export_artifact;
use uptilt_cli::runner::{
    run_compare, run_gue_sweep, run_nt_sweep, run_oracle, run_scheme, RunArtifact,
};
use uptilt_cli::scenario::{load_config, Scenario};
use uptilt_core::optimize::Scheme;

#[derive(Parser, Debug)]
#[command(
    name = "uptilt",
    version,
    about = "Multi-cell uptilt optimization and per-slot SIR evaluation"
)]
struct Cli {
    /// JSON scenario file; every omitted key takes its default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for the exported tables.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Thread count for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Override the inter-site distance in meters.
    #[arg(long, global = true)]
    isd: Option<f64>,

    /// Override the aerial grid altitude in meters.
    #[arg(long = "uav-height", global = true)]
    uav_height: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a single scheme end to end.
    Run {
        /// One of: dt_only, random, single, ga, hybrid_ga, pso.
        #[arg(long)]
        scheme: String,
    },
    /// Run several schemes on one scenario and merge their tables.
    Compare {
        /// Comma-separated scheme list.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "dt_only,random,single,ga,hybrid_ga,pso"
        )]
        schemes: Vec<String>,
    },
    /// Re-optimize with the hybrid scheme for each element count.
    SweepNt {
        /// Comma-separated vertical element counts.
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        nt: Vec<usize>,
    },
    /// Evaluate ground users across duty cycles and downtilts.
    SweepGue {
        /// Comma-separated duty-cycle values in [0, 1].
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        beta: Vec<f64>,
        /// Comma-separated downtilt angles in degrees.
        #[arg(long = "phi-dt", value_delimiter = ',', default_value = "0,-6,-12", allow_hyphen_values = true)]
        phi_dt: Vec<f64>,
    },
    /// Exhaustively solve the reduced three-site instance.
    Oracle {
        /// Tilt lattice step in degrees.
        #[arg(long, default_value_t = 5.0)]
        quantum: f64,
    },
}

/// What to execute, fully validated.
enum Plan {
    Run(Scheme),
    Compare(Vec<Scheme>),
    SweepNt(Vec<usize>),
    SweepGue(Vec<f64>, Vec<f64>),
    Oracle(f64),
}

fn parse_scheme(name: &str) -> Result<Scheme> {
    let scheme: Scheme = name
        .parse()
        .map_err(|_| anyhow!("scheme: unknown scheme {name:?}"))?;
    if scheme == Scheme::Oracle {
        bail!("scheme: the oracle runs on a reduced instance; use the oracle subcommand");
    }
    Ok(scheme)
}

/// Everything that can be rejected before any work starts: flags, config
/// file, and overrides. Failures here are configuration errors.
fn build(cli: &Cli) -> Result<(Scenario, Plan)> {
    let mut scenario = match &cli.config {
        Some(path) => load_config(path)?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    if let Some(isd) = cli.isd {
        scenario.isd = isd;
    }
    if let Some(h) = cli.uav_height {
        scenario.uav_height = h;
    }
    scenario.validate()?;
    if cli.threads == Some(0) {
        bail!("threads: must be at least 1");
    }

    let plan = match &cli.command {
        Command::Run { scheme } => Plan::Run(parse_scheme(scheme)?),
        Command::Compare { schemes } => {
            if schemes.is_empty() {
                bail!("schemes: at least one scheme is required");
            }
            Plan::Compare(
                schemes
                    .iter()
                    .map(|s| parse_scheme(s))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        Command::SweepNt { nt } => {
            if nt.is_empty() {
                bail!("nt: at least one element count is required");
            }
            if nt.iter().any(|&n| n == 0) {
                bail!("nt: element counts must be at least 1");
            }
            Plan::SweepNt(nt.clone())
        }
        Command::SweepGue { beta, phi_dt } => {
            if beta.is_empty() || phi_dt.is_empty() {
                bail!("sweep lists must be non-empty");
            }
            if let Some(bad) = beta
                .iter()
                .find(|b| !(b.is_finite() && (0.0..=1.0).contains(*b)))
            {
                bail!("beta: duty cycle must lie in [0, 1] (got {bad})");
            }
            if let Some(bad) = phi_dt.iter().find(|p| !(p.is_finite() && p.abs() < 90.0)) {
                bail!("phi_dt: downtilt must lie strictly inside (-90, 90) (got {bad})");
            }
            Plan::SweepGue(beta.clone(), phi_dt.clone())
        }
        Command::Oracle { quantum } => {
            if !(quantum.is_finite() && *quantum > 0.0) {
                bail!("quantum: must be positive (got {quantum})");
            }
            Plan::Oracle(*quantum)
        }
    };
    Ok((scenario, plan))
}

fn execute(scenario: &Scenario, plan: &Plan) -> Result<RunArtifact> {
    match plan {
        Plan::Run(scheme) => run_scheme(scenario, *scheme),
        Plan::Compare(schemes) => run_compare(scenario, schemes),
        Plan::SweepNt(nt) => run_nt_sweep(scenario, nt),
        Plan::SweepGue(beta, phi) => run_gue_sweep(scenario, beta, phi),
        Plan::Oracle(quantum) => run_oracle(scenario, *quantum),
    }
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    let (scenario, plan) = match build(&cli) {
        Ok(built) => built,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return 1;
        }
    };

    let started = Instant::now();
    eprintln!(
        "running: isd={} m, altitude={} m, spacing={} m, seed={}",
        scenario.isd, scenario.uav_height, scenario.grid_spacing, scenario.seed
    );

    let result = match cli.threads {
        Some(n) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool,
                Err(e) => {
                    eprintln!("runtime error: building thread pool: {e}");
                    return 2;
                }
            };
            pool.install(|| execute(&scenario, &plan))
        }
        None => execute(&scenario, &plan),
    };
    let mut artifact = match result {
        Ok(artifact) => artifact,
        Err(e) => {
            eprintln!("runtime error: {e:#}");
            return 2;
        }
    };

    // A reproducible timestamp can be injected; a wall clock would break
    // byte-identical reruns, so none is recorded by default.
    artifact.provenance.timestamp = std::env::var("SOURCE_DATE_EPOCH").ok();

    let files = match export_artifact(&artifact, &cli.out) {
        Ok(files) => files,
        Err(e) => {
            eprintln!("runtime error: {e:#}");
            return 2;
        }
    };
    for file in &files {
        println!("{}", file.display());
    }
    eprintln!("finished in {:.2} s", started.elapsed().as_secs_f64());
    0
}

fn main() {
    std::process::exit(real_main());
}
