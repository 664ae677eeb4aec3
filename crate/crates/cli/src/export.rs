//! Deterministic artifact export.
//!
//! One artifact becomes a directory of small files: a JSON echo of the
//! scenario with provenance, one tilt table and one SIR table per scheme,
//! one shared rate table, and one file per empirical CDF. All numbers are
//! written with nine significant digits so reruns can be compared byte for
//! byte; rows end with a newline, including the last.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::runner::{Provenance, RunArtifact};
use crate::scenario::Scenario;

/// Formats a float with nine significant digits, locale-independent.
fn sig9(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.8e}")
}

#[derive(Serialize)]
struct ScenarioDoc<'a> {
    scenario: &'a Scenario,
    provenance: &'a Provenance,
}

fn write_file(dir: &Path, name: &str, contents: &str, out: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    out.push(path);
    Ok(())
}

/// Writes every table of the artifact into `out_dir`, returning the paths in
/// the order written. Re-exporting the same artifact reproduces every file
/// byte for byte.
pub fn export_artifact(artifact: &RunArtifact, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let mut written = Vec::new();

    let doc = ScenarioDoc {
        scenario: &artifact.scenario,
        provenance: &artifact.provenance,
    };
    let mut json = serde_json::to_string_pretty(&doc).context("serializing scenario echo")?;
    json.push('\n');
    write_file(out_dir, "scenario.json", &json, &mut written)?;

    for run in &artifact.runs {
        if let Some(tilts) = &run.tilts {
            let mut csv = String::from("site_index,x,y,uptilt_deg\n");
            for (b, tilt) in tilts.iter().enumerate() {
                let (x, y) = artifact.sites[b];
                csv.push_str(&format!("{b},{},{},{}\n", sig9(x), sig9(y), sig9(*tilt)));
            }
            write_file(out_dir, &format!("tilts_{}.csv", run.tag), &csv, &mut written)?;
        }

        let mut csv = String::from("point_x,point_y,serving,sir_us_db,sir_cs_db\n");
        for (u, &(x, y)) in artifact.grid_points.iter().enumerate() {
            let cs = match &run.sir_cs_db {
                Some(cs) => sig9(cs[u]),
                None => "na".into(),
            };
            csv.push_str(&format!(
                "{},{},{},{},{cs}\n",
                sig9(x),
                sig9(y),
                run.serving[u],
                sig9(run.sir_us_db[u]),
            ));
        }
        write_file(out_dir, &format!("sir_{}.csv", run.tag), &csv, &mut written)?;
    }

    let mut rates = String::from("scheme,slot,min_se,median_se,sum_se\n");
    for run in &artifact.runs {
        for row in &run.rate_rows {
            rates.push_str(&format!(
                "{},{},{},{},{}\n",
                row.scheme,
                row.slot,
                sig9(row.min_se),
                sig9(row.median_se),
                sig9(row.sum_se),
            ));
        }
    }
    write_file(out_dir, "rates.csv", &rates, &mut written)?;

    for table in &artifact.ecdfs {
        let mut csv = String::from("value_db,prob\n");
        for &(value, prob) in &table.rows {
            csv.push_str(&format!("{},{}\n", sig9(value), sig9(prob)));
        }
        write_file(out_dir, &format!("ecdf_{}.csv", table.tag), &csv, &mut written)?;
    }

    Ok(written)
}
