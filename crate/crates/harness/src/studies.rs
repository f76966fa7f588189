//! Ablation sweeps and validation studies.

use anyhow::{bail, Context, Result};
use lipopt_core::acceptance::{acceptance_ratio_sweep, fit_log, phi_ratio_study};
use lipopt_core::benchmarks::{lookup, Benchmark};
use lipopt_core::projection::{distortion_study, DistortionStudy};
use lipopt_core::rng::{derive_seed, fnv1a64, stream, Stream};
use lipopt_core::{AcceptanceVariant, Archive, Objective, OptimizerKind};
use serde::{Deserialize, Serialize};

use crate::campaign::{self, CampaignResult, Job};
use crate::config::CampaignConfig;
use crate::output::SCHEMA_VERSION;

/// Jobs for an m sweep of full ECPv2; the setting column reads `m=<m>`.
pub fn ablate_m_jobs(config: &CampaignConfig, m_grid: &[usize]) -> Result<Vec<Job>> {
    if m_grid.is_empty() {
        bail!("m grid is empty");
    }
    let mut jobs = Vec::new();
    for objective in 0..config.objectives.len() {
        for &m in m_grid {
            if m == 0 {
                bail!("m must be >= 1");
            }
            for rep in 0..config.reps {
                let mut cfg = config.optimizer.clone();
                cfg.m = m;
                jobs.push(Job {
                    objective,
                    optimizer: OptimizerKind::ECPV2,
                    setting: format!("m={m}"),
                    config: cfg,
                    rep,
                });
            }
        }
    }
    Ok(jobs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MAblationRow {
    pub schema_version: u32,
    pub objective: String,
    pub dim: usize,
    pub m: usize,
    pub reps_ok: usize,
    pub mean_final_best: f64,
    pub std_final_best: f64,
    pub mean_seconds: f64,
    pub std_seconds: f64,
}

pub fn m_ablation_rows(result: &CampaignResult, m_grid: &[usize]) -> Vec<MAblationRow> {
    let mut rows = Vec::new();
    for (i, b) in result.objectives.iter().enumerate() {
        for &m in m_grid {
            let setting = format!("m={m}");
            let traces: Vec<_> = result.cell(i, OptimizerKind::ECPV2, &setting).collect();
            let (mb, sb) = campaign::mean_std(&traces.iter().map(|t| t.final_best_value).collect::<Vec<_>>());
            let (ms, ss) = campaign::mean_std(&traces.iter().map(|t| t.total_seconds).collect::<Vec<_>>());
            rows.push(MAblationRow {
                schema_version: SCHEMA_VERSION,
                objective: b.name().to_string(),
                dim: b.dim(),
                m,
                reps_ok: traces.len(),
                mean_final_best: mb,
                std_final_best: sb,
                mean_seconds: ms,
                std_seconds: ss,
            });
        }
    }
    rows
}

/// Jobs for the eight feature combinations, all sharing seeds.
pub fn ablate_features_jobs(config: &CampaignConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    for objective in 0..config.objectives.len() {
        for variant in AcceptanceVariant::all() {
            for rep in 0..config.reps {
                jobs.push(Job {
                    objective,
                    optimizer: OptimizerKind::Ecpv2(variant),
                    setting: String::new(),
                    config: config.optimizer.clone(),
                    rep,
                });
            }
        }
    }
    jobs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureRow {
    pub schema_version: u32,
    pub objective: String,
    pub dim: usize,
    pub optimizer: String,
    pub lower_bound: bool,
    pub worst_m: bool,
    pub projection: bool,
    pub reps_ok: usize,
    pub mean_final_best: f64,
    pub std_final_best: f64,
    pub mean_seconds: f64,
    pub std_seconds: f64,
}

pub fn feature_rows(result: &CampaignResult) -> Vec<FeatureRow> {
    let mut rows = Vec::new();
    for (i, b) in result.objectives.iter().enumerate() {
        for v in AcceptanceVariant::all() {
            let kind = OptimizerKind::Ecpv2(v);
            let traces: Vec<_> = result.cell(i, kind, "").collect();
            let (mb, sb) = campaign::mean_std(&traces.iter().map(|t| t.final_best_value).collect::<Vec<_>>());
            let (ms, ss) = campaign::mean_std(&traces.iter().map(|t| t.total_seconds).collect::<Vec<_>>());
            rows.push(FeatureRow {
                schema_version: SCHEMA_VERSION,
                objective: b.name().to_string(),
                dim: b.dim(),
                optimizer: kind.name(),
                lower_bound: v.lower_bound,
                worst_m: v.worst_m,
                projection: v.projection,
                reps_ok: traces.len(),
                mean_final_best: mb,
                std_final_best: sb,
                mean_seconds: ms,
                std_seconds: ss,
            });
        }
    }
    rows
}

/// Parameters of the distortion check over a (delta, beta) grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JlCheck {
    pub n_points: usize,
    pub d: usize,
    pub deltas: Vec<f64>,
    pub betas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Emit every pairwise ratio, not just the histogram.
    pub keep_ratios: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlSuccessRow {
    pub schema_version: u32,
    pub n_points: usize,
    pub d: usize,
    pub delta: f64,
    pub beta: f64,
    pub d_prime: usize,
    pub mode: String,
    pub trials: usize,
    pub success_rate: f64,
    /// `1 − 1/β²`.
    pub nominal_rate: f64,
    pub ratio_mean: f64,
    pub ratio_variance: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlHistogramRow {
    pub schema_version: u32,
    pub delta: f64,
    pub beta: f64,
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JlRatioRow {
    pub schema_version: u32,
    pub delta: f64,
    pub beta: f64,
    pub trial: usize,
    pub pair_i: usize,
    pub pair_j: usize,
    pub ratio: f64,
    pub success: bool,
}

#[derive(Debug, Default)]
pub struct JlOutput {
    pub success: Vec<JlSuccessRow>,
    pub histogram: Vec<JlHistogramRow>,
    pub ratios: Vec<JlRatioRow>,
}

const HIST_BINS: usize = 80;
const HIST_MAX: f64 = 2.0;

pub fn jl_check(p: &JlCheck) -> Result<JlOutput> {
    if p.deltas.is_empty() || p.betas.is_empty() {
        bail!("delta and beta grids must be non-empty");
    }
    if let Some(b) = p.betas.iter().find(|&&b| !(b > 1.0)) {
        bail!("beta must be > 1, got {b}");
    }
    let mut out = JlOutput::default();
    for &delta in &p.deltas {
        for &beta in &p.betas {
            let seed = derive_seed(p.seed, &[delta.to_bits(), beta.to_bits()]);
            let mut rng = stream(seed, Stream::Study);
            let study = DistortionStudy {
                n_points: p.n_points,
                d: p.d,
                delta,
                beta,
                trials: p.trials,
                keep_ratios: true,
            };
            let r = distortion_study(&study, &mut rng)?;
            let mut counts = [0u64; HIST_BINS];
            for s in &r.ratios {
                let bin = ((s.ratio / HIST_MAX) * HIST_BINS as f64) as usize;
                counts[bin.min(HIST_BINS - 1)] += 1;
            }
            out.histogram.extend(counts.iter().enumerate().map(|(k, &count)| JlHistogramRow {
                schema_version: SCHEMA_VERSION,
                delta,
                beta,
                bin_lo: HIST_MAX * k as f64 / HIST_BINS as f64,
                bin_hi: HIST_MAX * (k + 1) as f64 / HIST_BINS as f64,
                count,
            }));
            if p.keep_ratios {
                out.ratios.extend(r.ratios.iter().map(|s| JlRatioRow {
                    schema_version: SCHEMA_VERSION,
                    delta,
                    beta,
                    trial: s.trial,
                    pair_i: s.pair_i,
                    pair_j: s.pair_j,
                    ratio: s.ratio,
                    success: r.success[s.trial],
                }));
            }
            out.success.push(JlSuccessRow {
                schema_version: SCHEMA_VERSION,
                n_points: p.n_points,
                d: p.d,
                delta,
                beta,
                d_prime: r.d_prime,
                mode: format!("{:?}", r.mode).to_lowercase(),
                trials: p.trials,
                success_rate: r.success_rate(),
                nominal_rate: 1.0 - 1.0 / (beta * beta),
                ratio_mean: r.ratio_mean,
                ratio_variance: r.ratio_variance,
                ratio_min: r.ratio_min,
                ratio_max: r.ratio_max,
            });
        }
    }
    Ok(out)
}

/// Parameters of the threshold-floor sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbCheck {
    pub objective: String,
    /// Archive size.
    pub t: usize,
    /// Thresholds as multiples of each archive's floor.
    pub multiples: Vec<f64>,
    pub n_candidates: usize,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LbRow {
    pub schema_version: u32,
    pub objective: String,
    pub dim: usize,
    pub rep: usize,
    pub t: usize,
    pub eps_floor: f64,
    pub multiple: f64,
    pub eps: f64,
    pub fraction: f64,
}

/// `t` uniform evaluations of `objective`, drawn from the study stream.
pub fn random_archive(b: &Benchmark, t: usize, seed: u64, m: usize) -> Result<Archive> {
    let mut rng = stream(seed, Stream::Study);
    let mut a = Archive::new(m)?;
    for _ in 0..t {
        let x = b.space().sample(&mut rng);
        let v = b.evaluate(&x);
        a.push(x, None, v)?;
    }
    Ok(a)
}

pub fn lb_check(p: &LbCheck) -> Result<Vec<LbRow>> {
    let b = lookup(&p.objective)?;
    if p.t == 0 || p.reps == 0 {
        bail!("t and reps must be >= 1");
    }
    let mut rows = Vec::new();
    for rep in 0..p.reps {
        let seed = derive_seed(p.seed, &[fnv1a64(b.name().as_bytes()), rep as u64]);
        let archive = random_archive(&b, p.t, seed, usize::MAX)?;
        let floor = archive.epsilon_floor(b.space())?;
        let grid: Vec<f64> = p.multiples.iter().map(|c| c * floor).collect();
        let mut rng = stream(derive_seed(seed, &[1]), Stream::Candidates);
        let sweep = acceptance_ratio_sweep(&archive, b.space(), &grid, p.n_candidates, &mut rng)?;
        rows.extend(sweep.iter().zip(&p.multiples).map(|(s, &c)| LbRow {
            schema_version: SCHEMA_VERSION,
            objective: b.name().to_string(),
            dim: b.dim(),
            rep,
            t: p.t,
            eps_floor: floor,
            multiple: c,
            eps: s.eps,
            fraction: s.fraction,
        }));
    }
    Ok(rows)
}

/// Parameters of the full-versus-worst-m bound ratio study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCheck {
    pub objective: String,
    /// Archive size.
    pub n: usize,
    pub m_grid: Vec<usize>,
    pub trials: usize,
    pub eps: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiRow {
    pub schema_version: u32,
    pub objective: String,
    pub m: usize,
    pub n: usize,
    pub trial: usize,
    pub phi_full: f64,
    pub phi_m: f64,
    /// Empty when `phi_m == 0`.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiFitRow {
    pub schema_version: u32,
    pub objective: String,
    pub n: usize,
    pub trials: usize,
    pub excluded: usize,
    /// Slope of `mean ratio ≈ a·ln(m/n) + b`.
    pub a: f64,
    pub b: f64,
}

/// Each trial draws a fresh archive of `n` uniform points and one uniform
/// test point; ratios are averaged per `m` and fitted against `ln(m/n)`.
pub fn phi_check(p: &PhiCheck) -> Result<(Vec<PhiRow>, PhiFitRow)> {
    let b = lookup(&p.objective)?;
    if p.trials == 0 {
        bail!("trials must be >= 1");
    }
    let mut rows = Vec::new();
    for trial in 0..p.trials {
        let seed = derive_seed(p.seed, &[fnv1a64(b.name().as_bytes()), trial as u64]);
        let archive = random_archive(&b, p.n, seed, 1)?;
        let mut rng = stream(seed, Stream::Candidates);
        let x = b.space().sample(&mut rng);
        let samples = phi_ratio_study(&archive, &[x], &p.m_grid, p.eps)
            .with_context(|| format!("trial {trial}"))?;
        rows.extend(samples.into_iter().map(|s| PhiRow {
            schema_version: SCHEMA_VERSION,
            objective: b.name().to_string(),
            m: s.m,
            n: s.n,
            trial,
            phi_full: s.phi_full,
            phi_m: s.phi_m,
            ratio: s.ratio,
        }));
    }
    let mut points = Vec::new();
    for &m in &p.m_grid {
        let rs: Vec<f64> = rows.iter().filter(|r| r.m == m).filter_map(|r| r.ratio).collect();
        if !rs.is_empty() {
            points.push((m as f64 / p.n as f64, rs.iter().sum::<f64>() / rs.len() as f64));
        }
    }
    let (a, b_fit) = fit_log(&points).unwrap_or((f64::NAN, f64::NAN));
    let fit = PhiFitRow {
        schema_version: SCHEMA_VERSION,
        objective: b.name().to_string(),
        n: p.n,
        trials: p.trials,
        excluded: rows.iter().filter(|r| r.ratio.is_none()).count(),
        a,
        b: b_fit,
    };
    Ok((rows, fit))
}
