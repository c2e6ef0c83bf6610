use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use anyhow::{Context, Result};
use eon_core::metrics::{extra_load_handled, fsu_savings_percent, write_metrics_csv, MetricsRow};
use eon_core::model::NetworkDescription;
use eon_core::sim::{run_simulation, MetricsRecord, WindowSummary};
use eon_core::solvers::SolverKind;
use rayon::prelude::*;
use serde::Serialize;

use crate::network::load_network;
use crate::spec::ExperimentSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct RunData {
    pub requests: usize,
    pub blocked_requests: usize,
    pub events: usize,
    pub checkpoints: Vec<MetricsRecord>,
    pub window: WindowSummary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub run_id: String,
    pub solver: SolverKind,
    pub seed: u64,
    pub lambda: f64,
    pub hold_time: f64,
    pub outcome: Result<RunData, String>,
}

pub fn run_id(solver: SolverKind, lambda: f64, seed: u64) -> String {
    format!("{solver}-l{lambda}-s{seed}")
}

/// Runs every (arrival rate, solver, seed) job in parallel. Results come back in job order; a
/// failed run is reported in its result instead of aborting the sweep.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<RunResult>> {
    spec.validate()?;
    let net = load_network(&spec.topology, spec.slots)?;
    let jobs: Vec<(f64, SolverKind, u64)> = spec
        .arrival_rates()
        .into_iter()
        .flat_map(|l| spec.solvers.iter().flat_map(move |&k| spec.seeds.iter().map(move |&s| (l, k, s))))
        .collect();
    Ok(jobs.into_par_iter().map(|(lambda, kind, seed)| run_one(&net, spec, kind, lambda, seed)).collect())
}

pub fn run_one(net: &NetworkDescription, spec: &ExperimentSpec, kind: SolverKind, lambda: f64, seed: u64) -> RunResult {
    let (traffic, options) = spec.run_config(lambda, seed);
    let outcome = run_simulation(net, &traffic, &spec.solver(kind), &options)
        .map(|rep| RunData {
            requests: rep.requests.len(),
            blocked_requests: rep.blocked_requests(),
            events: rep.events,
            checkpoints: rep.checkpoints,
            window: rep.window,
        })
        .map_err(|e| e.to_string());
    RunResult {
        run_id: run_id(kind, lambda, seed),
        solver: kind,
        seed,
        lambda,
        hold_time: traffic.mean_hold_time,
        outcome,
    }
}

/// One metrics row per (run, checkpoint).
pub fn metrics_rows(runs: &[RunResult]) -> Vec<MetricsRow> {
    runs.iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|d| (r, d)))
        .flat_map(|(r, d)| {
            d.checkpoints.iter().map(move |c| MetricsRow {
                run_id: r.run_id.clone(),
                solver: r.solver.to_string(),
                seed: r.seed,
                lambda: r.lambda,
                hold_time: r.hold_time,
                checkpoint_load_gbps: c.checkpoint_load_gbps,
                naf: c.naf,
                bbp: c.bbp,
                occupied_slot_links: c.occupied_slot_links,
                admitted_gbps: c.admitted_gbps,
                blocked_gbps: c.blocked_gbps,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowRow {
    pub run_id: String,
    pub solver: String,
    pub seed: u64,
    pub lambda: f64,
    pub hold_time: f64,
    pub requests: usize,
    pub blocked: usize,
    pub requested_gbps: f64,
    pub blocked_gbps: f64,
    pub bbp: f64,
    pub mean_naf: f64,
    pub mean_carried_gbps: f64,
    pub mean_occupied_slot_links: f64,
}

/// Across-seed means at one load checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointSummary {
    pub solver: String,
    pub lambda: f64,
    pub hold_time: f64,
    pub checkpoint_load_gbps: f64,
    pub runs: usize,
    pub mean_naf: f64,
    pub mean_bbp: f64,
    pub mean_occupied_slot_links: f64,
    /// Mean per-seed slot savings against the k-shortest-path baseline.
    pub fsu_saved_vs_ksp_pct: Option<f64>,
}

/// Across-seed means of the post-warm-up window at one arrival rate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateSummary {
    pub solver: String,
    pub lambda: f64,
    pub hold_time: f64,
    pub runs: usize,
    pub blocked_requests: usize,
    pub mean_bbp: f64,
    pub mean_naf: f64,
    pub mean_carried_gbps: f64,
    pub extra_load_gbps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatusRow {
    pub run_id: String,
    pub solver: String,
    pub seed: u64,
    pub lambda: f64,
    pub status: &'static str,
    pub events: usize,
    pub message: String,
}

fn ok_runs(runs: &[RunResult]) -> impl Iterator<Item = (&RunResult, &RunData)> {
    runs.iter().filter_map(|r| r.outcome.as_ref().ok().map(|d| (r, d)))
}

fn distinct<T: PartialEq + Copy>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn window_rows(runs: &[RunResult]) -> Vec<WindowRow> {
    ok_runs(runs)
        .map(|(r, d)| WindowRow {
            run_id: r.run_id.clone(),
            solver: r.solver.to_string(),
            seed: r.seed,
            lambda: r.lambda,
            hold_time: r.hold_time,
            requests: d.window.requests,
            blocked: d.window.blocked,
            requested_gbps: d.window.requested_gbps,
            blocked_gbps: d.window.blocked_gbps,
            bbp: d.window.bbp,
            mean_naf: d.window.mean_naf,
            mean_carried_gbps: d.window.mean_carried_gbps,
            mean_occupied_slot_links: d.window.mean_occupied_slot_links,
        })
        .collect()
}

pub fn checkpoint_summary(runs: &[RunResult]) -> Vec<CheckpointSummary> {
    let lambdas = distinct(runs.iter().map(|r| r.lambda));
    let solvers = distinct(runs.iter().map(|r| r.solver));
    let find = |kind: SolverKind, lambda: f64, seed: u64, load: f64| {
        ok_runs(runs)
            .find(|(r, _)| r.solver == kind && r.lambda == lambda && r.seed == seed)
            .and_then(|(_, d)| d.checkpoints.iter().find(|c| c.checkpoint_load_gbps == load))
    };
    let mut out = Vec::new();
    for &lambda in &lambdas {
        for &kind in &solvers {
            let group: Vec<(&RunResult, &RunData)> =
                ok_runs(runs).filter(|(r, _)| r.solver == kind && r.lambda == lambda).collect();
            let Some(hold_time) = group.first().map(|(r, _)| r.hold_time) else { continue };
            let mut loads: Vec<f64> =
                distinct(group.iter().flat_map(|(_, d)| d.checkpoints.iter().map(|c| c.checkpoint_load_gbps)));
            loads.sort_by(f64::total_cmp);
            for load in loads {
                let points: Vec<(u64, &MetricsRecord)> = group
                    .iter()
                    .filter_map(|(r, d)| d.checkpoints.iter().find(|c| c.checkpoint_load_gbps == load).map(|c| (r.seed, c)))
                    .collect();
                let savings: Vec<f64> = points
                    .iter()
                    .filter_map(|&(seed, c)| {
                        find(SolverKind::Ksp, lambda, seed, load)
                            .map(|k| fsu_savings_percent(c.occupied_slot_links, k.occupied_slot_links))
                    })
                    .collect();
                out.push(CheckpointSummary {
                    solver: kind.to_string(),
                    lambda,
                    hold_time,
                    checkpoint_load_gbps: load,
                    runs: points.len(),
                    mean_naf: mean(&points.iter().map(|(_, c)| c.naf).collect::<Vec<_>>()),
                    mean_bbp: mean(&points.iter().map(|(_, c)| c.bbp).collect::<Vec<_>>()),
                    mean_occupied_slot_links: mean(
                        &points.iter().map(|(_, c)| c.occupied_slot_links as f64).collect::<Vec<_>>(),
                    ),
                    fsu_saved_vs_ksp_pct: (kind != SolverKind::Ksp && !savings.is_empty()).then(|| mean(&savings)),
                });
            }
        }
    }
    out
}

pub fn rate_summary(runs: &[RunResult]) -> Vec<RateSummary> {
    let lambdas = distinct(runs.iter().map(|r| r.lambda));
    let solvers = distinct(runs.iter().map(|r| r.solver));
    let mut out = Vec::new();
    for &lambda in &lambdas {
        let start = out.len();
        for &kind in &solvers {
            let group: Vec<(&RunResult, &RunData)> =
                ok_runs(runs).filter(|(r, _)| r.solver == kind && r.lambda == lambda).collect();
            let Some(hold_time) = group.first().map(|(r, _)| r.hold_time) else { continue };
            let w = |f: fn(&WindowSummary) -> f64| mean(&group.iter().map(|(_, d)| f(&d.window)).collect::<Vec<_>>());
            out.push(RateSummary {
                solver: kind.to_string(),
                lambda,
                hold_time,
                runs: group.len(),
                blocked_requests: group.iter().map(|(_, d)| d.blocked_requests).sum(),
                mean_bbp: w(|s| s.bbp),
                mean_naf: w(|s| s.mean_naf),
                mean_carried_gbps: w(|s| s.mean_carried_gbps),
                extra_load_gbps: 0.0,
            });
        }
        let carried: Vec<f64> = out[start..].iter().map(|r| r.mean_carried_gbps).collect();
        for (row, extra) in out[start..].iter_mut().zip(extra_load_handled(&carried)) {
            row.extra_load_gbps = extra;
        }
    }
    out
}

pub fn status_rows(runs: &[RunResult]) -> Vec<StatusRow> {
    runs.iter()
        .map(|r| StatusRow {
            run_id: r.run_id.clone(),
            solver: r.solver.to_string(),
            seed: r.seed,
            lambda: r.lambda,
            status: if r.outcome.is_ok() { "ok" } else { "failed" },
            events: r.outcome.as_ref().map(|d| d.events).unwrap_or(0),
            message: r.outcome.as_ref().err().cloned().unwrap_or_default(),
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub const OUTPUT_FILES: [&str; 5] = ["runs.csv", "windows.csv", "summary.csv", "rates.csv", "status.csv"];

/// Writes the sweep's CSV files into `dir`.
pub fn write_sweep(dir: &Path, runs: &[RunResult]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let file = File::create(dir.join("runs.csv"))?;
    write_metrics_csv(BufWriter::new(file), &metrics_rows(runs))?;
    write_csv(&dir.join("windows.csv"), &window_rows(runs))?;
    write_csv(&dir.join("summary.csv"), &checkpoint_summary(runs))?;
    write_csv(&dir.join("rates.csv"), &rate_summary(runs))?;
    write_csv(&dir.join("status.csv"), &status_rows(runs))?;
    Ok(())
}
