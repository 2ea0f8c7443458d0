//! Running configured experiments and writing their artifacts.
//!
//! A single run writes into its output directory:
//!
//! - `timeseries.csv`: `t,N_1,…,N_k,total,E,R`, one row per sample;
//! - `snapshots/bond<j>_step<n>.csv`: `x,re_phi,im_phi,re_chi,im_chi,density`;
//! - `summary.json`: final reflection and fractions, drifts, sum-rule data.
//!
//! A sweep writes `sweep.csv` (`alpha1,R_final`) and `sweep_summary.json`.
//! Floats are written with 17 significant digits. Files are staged in a
//! temporary directory and only moved into place once everything succeeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, SweepSpec};
use crate::diagnostics::{transmitted_fractions, DiagnosticsRecord, TRANSMITTED_THRESHOLD};
use crate::error::{Error, Result};
use crate::field::BondField;
use crate::graph::{Bond, StarGraph};
use crate::solver::{self, RunOutput};

/// Environment variable holding the sweep worker count.
pub const THREADS_ENV: &str = "DIRAC_GRAPH_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: usize,
    pub t_final: f64,
    pub final_reflection: f64,
    /// Outgoing-bond shares of the transmitted norm; `None` while the
    /// reflection is above the transmission threshold or when only bond 1
    /// is simulated.
    pub final_fractions: Option<Vec<f64>>,
    pub final_partial_norms: Vec<f64>,
    pub max_energy_drift: f64,
    pub max_norm_drift: f64,
    pub sum_rule_residual: f64,
    pub transparency_factor: f64,
}

impl RunSummary {
    pub fn from_run(config: &ExperimentConfig, output: &RunOutput) -> Self {
        let records = &output.records;
        let first = &records[0];
        let last = records.last().expect("at least the initial record");
        let drift = |value: fn(&DiagnosticsRecord) -> f64| {
            let base = value(first);
            if base == 0.0 {
                return records.iter().map(|r| value(r).abs()).fold(0.0, f64::max);
            }
            records.iter().map(|r| ((value(r) - base) / base).abs()).fold(0.0, f64::max)
        };
        let full_graph = last.partial_norms.len() == config.graph.len();
        let final_fractions = full_graph
            .then(|| transmitted_fractions(&last.partial_norms, TRANSMITTED_THRESHOLD).ok())
            .flatten();
        Self {
            steps: config.params.n_steps,
            t_final: last.t,
            final_reflection: last.reflection,
            final_fractions,
            final_partial_norms: last.partial_norms.clone(),
            max_energy_drift: drift(|r| r.energy),
            max_norm_drift: drift(|r| r.total_norm),
            sum_rule_residual: config.graph.sum_rule_residual(),
            transparency_factor: config.graph.transparency_factor(),
        }
    }
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn timeseries_csv(records: &[DiagnosticsRecord]) -> String {
    let bonds = records.first().map_or(0, |r| r.partial_norms.len());
    let mut out = String::from("t");
    for j in 1..=bonds {
        write!(out, ",N_{j}").unwrap();
    }
    out.push_str(",total,E,R\n");
    for r in records {
        out.push_str(&fmt_f(r.t));
        for n in &r.partial_norms {
            out.push(',');
            out.push_str(&fmt_f(*n));
        }
        writeln!(out, ",{},{},{}", fmt_f(r.total_norm), fmt_f(r.energy), fmt_f(r.reflection)).unwrap();
    }
    out
}

/// `χ` carried to integer node `j`: mean of the neighbouring half-nodes,
/// two-point extrapolation at the bond ends.
fn chi_at_node(f: &BondField, j: usize) -> Complex64 {
    let cells = f.cells();
    match j {
        0 if cells >= 2 => (f.chi[0] * 3.0 - f.chi[1]) * 0.5,
        0 => f.chi[0],
        j if j == cells && cells >= 2 => (f.chi[cells - 1] * 3.0 - f.chi[cells - 2]) * 0.5,
        j if j == cells => f.chi[cells - 1],
        j => (f.chi[j - 1] + f.chi[j]) * 0.5,
    }
}

pub fn snapshot_csv(bond: &Bond, f: &BondField) -> String {
    let mut out = String::from("x,re_phi,im_phi,re_chi,im_chi,density\n");
    for (j, phi) in f.phi.iter().enumerate() {
        let chi = chi_at_node(f, j);
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f(bond.node_x(j)),
            fmt_f(phi.re),
            fmt_f(phi.im),
            fmt_f(chi.re),
            fmt_f(chi.im),
            fmt_f(phi.norm_sqr() + chi.norm_sqr())
        )
        .unwrap();
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Writes files into a staging directory under `out_dir` and moves them into
/// place when `fill` succeeds. On error nothing is left behind.
fn staged(out_dir: &Path, fill: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let staging = tempfile::Builder::new()
        .prefix(".staging-")
        .tempdir_in(out_dir)
        .map_err(|e| Error::io(out_dir, e))?;
    fill(staging.path())?;
    let entries = fs::read_dir(staging.path()).map_err(|e| Error::io(staging.path(), e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(staging.path(), e))?;
        let target = out_dir.join(entry.file_name());
        if target.is_dir() {
            fs::remove_dir_all(&target).map_err(|e| Error::io(&target, e))?;
        }
        fs::rename(entry.path(), &target).map_err(|e| Error::io(&target, e))?;
    }
    Ok(())
}

fn write_run_artifacts(dir: &Path, graph: &StarGraph, output: &RunOutput, summary: &RunSummary) -> Result<()> {
    write_file(&dir.join("timeseries.csv"), &timeseries_csv(&output.records))?;
    if !output.snapshots.is_empty() {
        let snap_dir = dir.join("snapshots");
        fs::create_dir_all(&snap_dir).map_err(|e| Error::io(&snap_dir, e))?;
        for snap in &output.snapshots {
            for (bond, f) in graph.bonds().iter().zip(&snap.field.bonds) {
                let name = format!("bond{}_step{:06}.csv", bond.id, snap.step);
                write_file(&snap_dir.join(name), &snapshot_csv(bond, f))?;
            }
        }
    }
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    write_file(&dir.join("summary.json"), &json)
}

/// Runs `config` (ignoring any sweep section) and writes its artifacts
/// into `out_dir`.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    let output = solver::run(&config.setup())?;
    let summary = RunSummary::from_run(config, &output);
    staged(out_dir, |dir| write_run_artifacts(dir, &config.graph, &output, &summary))?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub alpha1: f64,
    /// Final reflection coefficient, or the error message of a failed point.
    pub reflection: std::result::Result<f64, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub argmin_alpha1: Option<f64>,
    pub min_reflection: Option<f64>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.reflection.is_err()).count()
    }
}

/// Final reflection coefficient of one run.
pub fn final_reflection(config: &ExperimentConfig) -> Result<f64> {
    let mut setup = config.setup();
    setup.snapshot_steps.clear();
    setup.sample_every = setup.params.n_steps.max(1);
    let output = solver::run(&setup)?;
    Ok(output.records.last().expect("initial record").reflection)
}

/// Worker count from [`THREADS_ENV`], `None` when unset or unparsable.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs one simulation per `α₁` value of `sweep`. Failed points are
/// recorded and the sweep carries on.
pub fn sweep_alpha1(config: &ExperimentConfig, sweep: &SweepSpec, threads: Option<usize>) -> Result<SweepOutcome> {
    sweep.validate()?;
    let values = sweep.values();
    let eval = |alpha1: f64| SweepPoint {
        alpha1,
        reflection: config
            .with_alpha1(alpha1)
            .map_err(Error::from)
            .and_then(|c| final_reflection(&c))
            .map_err(|e| e.to_string()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    let points: Vec<SweepPoint> = pool.install(|| values.par_iter().map(|&a| eval(a)).collect());
    let best = points
        .iter()
        .filter_map(|p| p.reflection.as_ref().ok().map(|r| (p.alpha1, *r)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    Ok(SweepOutcome { points, argmin_alpha1: best.map(|b| b.0), min_reflection: best.map(|b| b.1) })
}

pub fn sweep_csv(outcome: &SweepOutcome) -> String {
    let mut out = String::from("alpha1,R_final\n");
    for p in &outcome.points {
        let r = match &p.reflection {
            Ok(r) => fmt_f(*r),
            Err(_) => "nan".to_string(),
        };
        writeln!(out, "{},{}", fmt_f(p.alpha1), r).unwrap();
    }
    out
}

/// Runs the sweep and writes `sweep.csv` and `sweep_summary.json`.
pub fn run_sweep(config: &ExperimentConfig, sweep: &SweepSpec, threads: Option<usize>, out_dir: &Path) -> Result<SweepOutcome> {
    let outcome = sweep_alpha1(config, sweep, threads)?;
    staged(out_dir, |dir| {
        write_file(&dir.join("sweep.csv"), &sweep_csv(&outcome))?;
        let json = serde_json::to_string_pretty(&outcome).expect("sweep outcome serializes");
        write_file(&dir.join("sweep_summary.json"), &json)
    })?;
    Ok(outcome)
}

/// Output directory from the CLI, falling back on the config file.
pub fn resolve_out_dir(cli: Option<PathBuf>, config: &ExperimentConfig) -> Option<PathBuf> {
    cli.or_else(|| config.output_dir.clone())
}
