//! Repeated runs of optimizers on benchmarks.

use std::path::Path;

use anyhow::{Context, Result};
use lipopt_core::benchmarks::{lookup, Benchmark};
use lipopt_core::rng::{derive_seed, fnv1a64};
use lipopt_core::{Objective, OptimizerConfig, OptimizerKind, RunTrace};
use rayon::prelude::*;

use crate::config::CampaignConfig;
use crate::output::{self, RunRow, SummaryRow, SCHEMA_VERSION};

/// Seed of rep `rep`: splitmix64 chain over
/// `(base, fnv1a64(objective), fnv1a64(optimizer seed label), rep)`.
pub fn run_seed(base: u64, objective: &str, optimizer: OptimizerKind, rep: usize) -> u64 {
    derive_seed(
        base,
        &[
            fnv1a64(objective.as_bytes()),
            fnv1a64(optimizer.seed_label().as_bytes()),
            rep as u64,
        ],
    )
}

/// One unit of work.
#[derive(Debug, Clone)]
pub struct Job {
    pub objective: usize,
    pub optimizer: OptimizerKind,
    /// Free-form label of the ablation cell.
    pub setting: String,
    pub config: OptimizerConfig,
    pub rep: usize,
}

#[derive(Debug)]
pub struct Outcome {
    pub job: Job,
    pub seed: u64,
    pub result: std::result::Result<RunTrace, String>,
}

impl Outcome {
    pub fn trace(&self) -> Option<&RunTrace> {
        self.result.as_ref().ok()
    }
}

/// Resolved benchmarks plus the outcome of every job, in job order.
#[derive(Debug)]
pub struct CampaignResult {
    pub objectives: Vec<Benchmark>,
    pub outcomes: Vec<Outcome>,
}

impl CampaignResult {
    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| o.result.is_err()).count()
    }

    /// Successful traces of one (objective, optimizer, setting) cell.
    pub fn cell<'a>(
        &'a self,
        objective: usize,
        optimizer: OptimizerKind,
        setting: &'a str,
    ) -> impl Iterator<Item = &'a RunTrace> + 'a {
        self.outcomes
            .iter()
            .filter(move |o| o.job.objective == objective && o.job.optimizer == optimizer && o.job.setting == setting)
            .filter_map(Outcome::trace)
    }
}

pub fn resolve_objectives(names: &[String]) -> Result<Vec<Benchmark>> {
    names
        .iter()
        .map(|n| lookup(n).with_context(|| format!("objective `{n}`")))
        .collect()
}

/// The plain campaign grid: objectives × optimizers × reps.
pub fn plain_jobs(config: &CampaignConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for objective in 0..config.objectives.len() {
        for &optimizer in &config.optimizers {
            for rep in 0..config.reps {
                jobs.push(Job {
                    objective,
                    optimizer,
                    setting: String::new(),
                    config: config.optimizer.clone(),
                    rep,
                });
            }
        }
    }
    jobs
}

/// Runs `jobs` on a pool of `config.parallel` workers. Results come back
/// in job order whatever the pool size; a failing run only affects its own
/// outcome.
pub fn execute(config: &CampaignConfig, jobs: Vec<Job>) -> Result<CampaignResult> {
    let objectives = resolve_objectives(&config.objectives)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallel)
        .build()
        .context("building worker pool")?;
    let outcomes = pool.install(|| {
        jobs.into_par_iter()
            .map(|job| {
                let objective = &objectives[job.objective];
                let seed = run_seed(config.base_seed, objective.name(), job.optimizer, job.rep);
                let cfg = job.config.clone().with_seed(seed);
                let result = job.optimizer.run(objective, &cfg).map_err(|e| e.to_string());
                Outcome { job, seed, result }
            })
            .collect()
    });
    Ok(CampaignResult { objectives, outcomes })
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

pub fn run_rows(result: &CampaignResult, trace_dir: Option<&Path>) -> Vec<RunRow> {
    result
        .outcomes
        .iter()
        .map(|o| {
            let b = &result.objectives[o.job.objective];
            let optimizer = o.job.optimizer.name();
            let t = o.trace();
            RunRow {
                schema_version: SCHEMA_VERSION,
                objective: b.name().to_string(),
                dim: b.dim(),
                domain: output::domain_string(b.spec()),
                optimizer: optimizer.clone(),
                setting: o.job.setting.clone(),
                rep: o.job.rep,
                seed: o.seed,
                status: if t.is_some() { "ok" } else { "error" },
                evaluations: t.map_or(0, RunTrace::len),
                final_best: t.map(|t| t.final_best_value),
                final_best_t: t.map(|t| t.final_best_t),
                total_proposals: t.map(|t| t.total_proposals),
                total_seconds: t.map(|t| t.total_seconds),
                objective_seconds: t.map(|t| t.objective_seconds),
                trace_path: match (t, trace_dir) {
                    (Some(_), Some(dir)) => Some(
                        output::trace_path(dir, b.name(), &optimizer, &o.job.setting, o.job.rep)
                            .strip_prefix(dir)
                            .expect("trace path lives under the output directory")
                            .display()
                            .to_string(),
                    ),
                    _ => None,
                },
                error: o.result.as_ref().err().cloned(),
            }
        })
        .collect()
}

/// One summary row per cell, in first-appearance order.
pub fn summary_rows(result: &CampaignResult) -> Vec<SummaryRow> {
    let mut cells: Vec<(usize, OptimizerKind, String)> = Vec::new();
    for o in &result.outcomes {
        let key = (o.job.objective, o.job.optimizer, o.job.setting.clone());
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    cells
        .into_iter()
        .map(|(obj, opt, setting)| {
            let reps = result
                .outcomes
                .iter()
                .filter(|o| o.job.objective == obj && o.job.optimizer == opt && o.job.setting == setting)
                .count();
            let traces: Vec<&RunTrace> = result.cell(obj, opt, &setting).collect();
            let best: Vec<f64> = traces.iter().map(|t| t.final_best_value).collect();
            let secs: Vec<f64> = traces.iter().map(|t| t.total_seconds).collect();
            let props: Vec<f64> = traces.iter().map(|t| t.total_proposals as f64).collect();
            let (mean_best, std_best) = mean_std(&best);
            let (mean_secs, std_secs) = mean_std(&secs);
            let b = &result.objectives[obj];
            SummaryRow {
                schema_version: SCHEMA_VERSION,
                objective: b.name().to_string(),
                dim: b.dim(),
                domain: output::domain_string(b.spec()),
                optimizer: opt.name(),
                setting: setting.clone(),
                reps,
                reps_ok: traces.len(),
                known_max: b.known_max(),
                mean_final_best: mean_best,
                std_final_best: std_best,
                median_final_best: median(&best),
                mean_proposals: mean_std(&props).0,
                mean_seconds: mean_secs,
                std_seconds: std_secs,
            }
        })
        .collect()
}

/// Writes `config.json`, `runs.csv`, `summary.csv` and optional traces.
pub fn write_results(config: &CampaignConfig, result: &CampaignResult, dir: &Path) -> Result<()> {
    output::write_json(&dir.join("config.json"), config)?;
    let trace_dir = config.write_traces.then_some(dir);
    if config.write_traces {
        for o in &result.outcomes {
            if let Some(t) = o.trace() {
                let b = &result.objectives[o.job.objective];
                let path = output::trace_path(dir, b.name(), &o.job.optimizer.name(), &o.job.setting, o.job.rep);
                output::write_csv(&path, &output::trace_rows(t))?;
            }
        }
    }
    output::write_csv(&dir.join("runs.csv"), &run_rows(result, trace_dir))?;
    output::write_csv(&dir.join("summary.csv"), &summary_rows(result))?;
    Ok(())
}
