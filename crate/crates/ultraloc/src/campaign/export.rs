//! Artifact persistence: a run directory holds the resolved config snapshot,
//! a JSON summary and plot-ready CSV tables. Numbers are written in Rust's
//! shortest round-trip form, which is locale independent and lossless, so a
//! re-run with the same seed produces byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::runner::RunArtifact;

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file =
        fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Directory for a run: `<out_dir>/run-<config hash>-<mode>`.
pub fn run_dir(out_dir: &Path, artifact: &RunArtifact) -> PathBuf {
    out_dir.join(format!(
        "run-{}-{}",
        artifact.run_id,
        artifact.config.mode.label()
    ))
}

fn positions_csv(artifact: &RunArtifact) -> String {
    let mut out = String::from(
        "index,x_m,y_m,z_m,mean_error_m,error_std_m,rmse_m,mean_range_sigma_m,peb_m2,dop\n",
    );
    for p in &artifact.per_position {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.index,
            fmt(p.position_m[0]),
            fmt(p.position_m[1]),
            fmt(p.position_m[2]),
            fmt(p.mean_error_m),
            fmt(p.error_std_m),
            fmt(p.rmse_m),
            fmt(p.mean_range_sigma_m),
            fmt_opt(p.peb_m2),
            fmt_opt(p.dop),
        ));
    }
    out
}

fn cdf_csv(artifact: &RunArtifact) -> String {
    let mut out = String::from("value_m,fraction\n");
    for p in &artifact.stats.cdf {
        out.push_str(&format!("{},{}\n", fmt(p.value), fmt(p.fraction)));
    }
    out
}

fn bounds_csv(artifact: &RunArtifact) -> Option<String> {
    let bounds = artifact.bounds.as_ref()?;
    let mut out = String::from("source,value_m,fraction\n");
    for p in &bounds.rmse_cdf {
        out.push_str(&format!("rmse,{},{}\n", fmt(p.value), fmt(p.fraction)));
    }
    for p in &bounds.peb_sqrt_cdf {
        out.push_str(&format!("peb_sqrt,{},{}\n", fmt(p.value), fmt(p.fraction)));
    }
    Some(out)
}

fn iterations_jsonl(artifact: &RunArtifact) -> Option<String> {
    if artifact.iterations.is_empty() {
        return None;
    }
    let mut out = String::new();
    for it in &artifact.iterations {
        out.push_str(&serde_json::to_string(it).expect("iteration summary serializes"));
        out.push('\n');
    }
    Some(out)
}

/// Write every table of an artifact into `dir` (created if needed).
pub fn export_tables(artifact: &RunArtifact, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    write_file(&dir.join("positions.csv"), &positions_csv(artifact))?;
    write_file(&dir.join("errors_cdf.csv"), &cdf_csv(artifact))?;
    if let Some(csv) = bounds_csv(artifact) {
        write_file(&dir.join("bounds_cdf.csv"), &csv)?;
    }
    if let Some(jsonl) = iterations_jsonl(artifact) {
        write_file(&dir.join("iterations.jsonl"), &jsonl)?;
    }
    Ok(())
}

/// Persist a full run: config snapshot, JSON summary and CSV tables.
/// Returns the run directory.
pub fn write_artifact(artifact: &RunArtifact, out_dir: &Path) -> Result<PathBuf> {
    let dir = run_dir(out_dir, artifact);
    fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    write_file(&dir.join("config.toml"), &artifact.config.to_toml_string())?;
    let json = serde_json::to_string_pretty(artifact).expect("artifact serializes");
    write_file(&dir.join("summary.json"), &json)?;
    export_tables(artifact, &dir)?;
    Ok(dir)
}

/// Load the JSON summary back from a run directory.
pub fn load_artifact(dir: &Path) -> Result<RunArtifact> {
    let path = dir.join("summary.json");
    let text =
        fs::read_to_string(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Table-I-style sweep summary plus the combined error/bound CDF table.
/// Returns the sweep directory.
pub fn write_sweep(artifacts: &[RunArtifact], out_dir: &Path) -> Result<PathBuf> {
    let first = artifacts.first().ok_or_else(|| {
        Error::InvalidArgument("cannot export an empty sweep".into())
    })?;
    let dir = run_dir(out_dir, first);
    fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;

    let mut summary = String::from("anchors,sigma_m,mu_m,p95_m\n");
    for artifact in artifacts {
        summary.push_str(&format!(
            "{},{},{},{}\n",
            artifact.anchor_count,
            fmt(artifact.stats.sigma),
            fmt(artifact.stats.mu),
            fmt(artifact.stats.p95),
        ));
    }
    write_file(&dir.join("sweep_summary.csv"), &summary)?;

    let mut cdf = String::from("anchors,source,value_m,fraction\n");
    for artifact in artifacts {
        for p in &artifact.stats.cdf {
            cdf.push_str(&format!(
                "{},error,{},{}\n",
                artifact.anchor_count,
                fmt(p.value),
                fmt(p.fraction)
            ));
        }
        let mut peb_sqrt: Vec<f64> = artifact
            .per_position
            .iter()
            .filter_map(|p| p.peb_m2)
            .map(f64::sqrt)
            .collect();
        peb_sqrt.sort_by(|a, b| a.total_cmp(b));
        for (i, v) in peb_sqrt.iter().enumerate() {
            cdf.push_str(&format!(
                "{},peb_sqrt,{},{}\n",
                artifact.anchor_count,
                fmt(*v),
                fmt((i + 1) as f64 / peb_sqrt.len() as f64)
            ));
        }
    }
    write_file(&dir.join("sweep_cdf.csv"), &cdf)?;

    for artifact in artifacts {
        let sub = dir.join(format!("m{:02}", artifact.anchor_count));
        fs::create_dir_all(&sub).map_err(|e| Error::io(sub.display().to_string(), e))?;
        write_file(&sub.join("config.toml"), &artifact.config.to_toml_string())?;
        let json = serde_json::to_string_pretty(artifact).expect("artifact serializes");
        write_file(&sub.join("summary.json"), &json)?;
        export_tables(artifact, &sub)?;
    }
    Ok(dir)
}
