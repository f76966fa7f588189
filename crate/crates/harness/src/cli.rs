//! Command-line interface.

use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use lipopt_core::{OptimizerKind, Tau, TimingMode};
use serde::Serialize;

use crate::campaign::{self, CampaignResult};
use crate::config::CampaignConfig;
use crate::output;
use crate::studies::{self, JlCheck, LbCheck, PhiCheck};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LIPOPT_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug, Parser)]
#[command(name = "lipopt", version, about = "Lipschitz black-box optimization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run optimizers on benchmarks, `reps` seeds each.
    Run(CampaignArgs),
    /// Sweep the worst-m size of full ECPv2.
    AblateM {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// Comma-separated m values.
        #[arg(long, value_delimiter = ',', required = true)]
        m_grid: Vec<usize>,
    },
    /// Run all eight combinations of the ECPv2 features.
    AblateFeatures(CampaignArgs),
    /// Empirical pairwise distortion of the random projection.
    JlCheck(JlArgs),
    /// Acceptance fraction around the threshold floor.
    LbCheck(LbArgs),
    /// Full-archive versus worst-m bound ratios.
    PhiRatio(PhiArgs),
    /// Dump the benchmark registry as JSON.
    Registry {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Flags shared by campaign-style subcommands. Each overrides the matching
/// field of `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct CampaignArgs {
    /// JSON campaign file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Benchmark as NAME or NAME:DIM; repeatable or comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub objective: Vec<String>,
    /// ecpv2, ecp, prs, adalipo or ecpv2[lb+wm+proj]; repeatable.
    #[arg(long, value_delimiter = ',')]
    pub optimizer: Vec<OptimizerKind>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eps1: Option<f64>,
    /// Growth factor, a number or `auto`.
    #[arg(long)]
    pub tau: Option<Tau>,
    /// Rejections tolerated before the threshold grows.
    #[arg(long)]
    pub patience: Option<u64>,
    /// Abort a run after this many consecutive rejections.
    #[arg(long)]
    pub max_proposals: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Output directory. Falls back to the config file, then $LIPOPT_OUT_DIR.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// full or optimizer-only.
    #[arg(long)]
    pub timing: Option<TimingMode>,
    /// Write one trace CSV per run.
    #[arg(long)]
    pub traces: bool,
}

impl CampaignArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<CampaignConfig> {
        let mut c = match &self.config {
            Some(p) => CampaignConfig::from_json_file(p)?,
            None => CampaignConfig::default(),
        };
        if !self.objective.is_empty() {
            c.objectives = self.objective.clone();
        }
        if !self.optimizer.is_empty() {
            c.optimizers = self.optimizer.clone();
        }
        let o = &mut c.optimizer;
        macro_rules! set {
            ($dst:expr, $src:expr) => {
                if let Some(v) = $src {
                    $dst = v;
                }
            };
        }
        set!(o.budget, self.budget);
        set!(o.m, self.m);
        set!(o.delta, self.delta);
        set!(o.beta, self.beta);
        set!(o.eps1, self.eps1);
        set!(o.tau, self.tau);
        set!(o.patience, self.patience);
        set!(o.timing, self.timing);
        if self.max_proposals.is_some() {
            o.max_proposals_per_eval = self.max_proposals;
        }
        set!(c.reps, self.reps);
        set!(c.base_seed, self.seed);
        set!(c.parallel, self.parallel);
        if self.out.is_some() {
            c.output_dir = self.out.clone();
        }
        c.write_traces |= self.traces;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Args)]
pub struct JlArgs {
    #[arg(long, default_value_t = 100)]
    pub n_points: usize,
    #[arg(long, default_value_t = 1000)]
    pub d: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.6666666666666666")]
    pub delta_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1.5,2.5,5")]
    pub beta_grid: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write every pairwise ratio.
    #[arg(long)]
    pub keep_ratios: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LbArgs {
    #[arg(long, default_value = "ackley:10")]
    pub objective: String,
    /// Archive size.
    #[arg(long, default_value_t = 5)]
    pub t: usize,
    /// Thresholds as multiples of the floor.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.1,0.25,0.5,0.75,0.9,0.99,1,1.1,1.5,2,3,5,10,20,50,100"
    )]
    pub eps_multiples: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n_candidates: usize,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PhiArgs {
    #[arg(long, default_value = "ackley:2")]
    pub objective: String,
    /// Archive size.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,100")]
    pub m_grid: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Output directory: flag or config value, then the environment, then
/// `results`.
pub fn resolve_out_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn finish(result: &CampaignResult, dir: &Path) -> Result<()> {
    let failed = result.failures();
    if failed > 0 {
        bail!(
            "{failed} of {} runs failed; partial results in {}",
            result.outcomes.len(),
            dir.display()
        );
    }
    eprintln!("wrote results to {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct MAblationDump<'a> {
    campaign: &'a CampaignConfig,
    m_grid: &'a [usize],
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let c = args.resolve()?;
            let dir = resolve_out_dir(c.output_dir.as_deref());
            let r = campaign::execute(&c, campaign::plain_jobs(&c))?;
            campaign::write_results(&c, &r, &dir)?;
            finish(&r, &dir)
        }
        Command::AblateM { campaign: args, m_grid } => {
            let c = args.resolve()?;
            let dir = resolve_out_dir(c.output_dir.as_deref());
            let r = campaign::execute(&c, studies::ablate_m_jobs(&c, &m_grid)?)?;
            campaign::write_results(&c, &r, &dir)?;
            output::write_json(&dir.join("config.json"), &MAblationDump { campaign: &c, m_grid: &m_grid })?;
            output::write_csv(&dir.join("m_ablation.csv"), &studies::m_ablation_rows(&r, &m_grid))?;
            finish(&r, &dir)
        }
        Command::AblateFeatures(args) => {
            let c = args.resolve()?;
            let dir = resolve_out_dir(c.output_dir.as_deref());
            let r = campaign::execute(&c, studies::ablate_features_jobs(&c))?;
            campaign::write_results(&c, &r, &dir)?;
            output::write_csv(&dir.join("features.csv"), &studies::feature_rows(&r))?;
            finish(&r, &dir)
        }
        Command::JlCheck(a) => {
            let p = JlCheck {
                n_points: a.n_points,
                d: a.d,
                deltas: a.delta_grid,
                betas: a.beta_grid,
                trials: a.trials,
                seed: a.seed,
                keep_ratios: a.keep_ratios,
            };
            let dir = resolve_out_dir(a.out.as_deref());
            let out = studies::jl_check(&p)?;
            output::write_json(&dir.join("config.json"), &p)?;
            output::write_csv(&dir.join("jl_success.csv"), &out.success)?;
            output::write_csv(&dir.join("jl_histogram.csv"), &out.histogram)?;
            if p.keep_ratios {
                output::write_csv(&dir.join("jl_ratios.csv"), &out.ratios)?;
            }
            eprintln!("wrote results to {}", dir.display());
            Ok(())
        }
        Command::LbCheck(a) => {
            let p = LbCheck {
                objective: a.objective,
                t: a.t,
                multiples: a.eps_multiples,
                n_candidates: a.n_candidates,
                reps: a.reps,
                seed: a.seed,
            };
            let dir = resolve_out_dir(a.out.as_deref());
            let rows = studies::lb_check(&p)?;
            output::write_json(&dir.join("config.json"), &p)?;
            output::write_csv(&dir.join("lb_check.csv"), &rows)?;
            eprintln!("wrote results to {}", dir.display());
            Ok(())
        }
        Command::PhiRatio(a) => {
            let p = PhiCheck {
                objective: a.objective,
                n: a.n,
                m_grid: a.m_grid,
                trials: a.trials,
                eps: a.eps,
                seed: a.seed,
            };
            let dir = resolve_out_dir(a.out.as_deref());
            let (rows, fit) = studies::phi_check(&p)?;
            output::write_json(&dir.join("config.json"), &p)?;
            output::write_csv(&dir.join("phi_ratio.csv"), &rows)?;
            output::write_csv(&dir.join("phi_fit.csv"), &[fit])?;
            eprintln!("wrote results to {}", dir.display());
            Ok(())
        }
        Command::Registry { out } => {
            let reg = lipopt_core::benchmarks::registry();
            match out {
                Some(dir) => output::write_json(&dir.join("registry.json"), &reg),
                None => {
                    println!("{}", serde_json::to_string_pretty(&reg)?);
                    Ok(())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"objectives": ["camel"], "reps": 7, "optimizer": {"budget": 30, "m": 4}}"#,
        )
        .unwrap();
        let cli = Cli::parse_from([
            "lipopt", "run", "--config", path.to_str().unwrap(), "--m", "16", "--tau", "auto", "--timing",
            "optimizer-only",
        ]);
        let Command::Run(args) = cli.command else { panic!() };
        let c = args.resolve().unwrap();
        assert_eq!(c.objectives, vec!["camel"]);
        assert_eq!(c.reps, 7);
        assert_eq!(c.optimizer.budget, 30);
        assert_eq!(c.optimizer.m, 16);
        assert_eq!(c.optimizer.timing, TimingMode::OptimizerOnly);
    }

    #[test]
    fn parses_lists_and_kinds() {
        let cli = Cli::parse_from([
            "lipopt", "run", "--objective", "rosenbrock:3,himmelblau", "--optimizer", "ecp", "--optimizer",
            "ecpv2[lb+wm]", "--tau", "1.01",
        ]);
        let Command::Run(args) = cli.command else { panic!() };
        let c = args.resolve().unwrap();
        assert_eq!(c.objectives.len(), 2);
        assert_eq!(c.optimizers[1].name(), "ecpv2[lb+wm]");
        assert_eq!(c.optimizer.tau, Tau::Fixed(1.01));
        assert!(Cli::try_parse_from(["lipopt", "run", "--optimizer", "lipo"]).is_err());
    }

    #[test]
    fn beta_must_exceed_one() {
        let cli = Cli::parse_from(["lipopt", "run", "--objective", "camel", "--beta", "0.22"]);
        let Command::Run(args) = cli.command else { panic!() };
        assert!(args.resolve().is_err());
    }
}
