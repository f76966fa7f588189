//! Campaign configuration: JSON file, then command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lipopt_core::{OptimizerConfig, OptimizerKind};
use serde::{Deserialize, Serialize};

/// Everything a campaign needs. Serialized verbatim next to its results.
///
/// Precedence, lowest first: built-in defaults, the `--config` file, flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    /// Benchmark names, `name`, `name:dim` or `name<dim>`.
    pub objectives: Vec<String>,
    pub optimizers: Vec<OptimizerKind>,
    pub reps: usize,
    /// Mixed with objective, optimizer and rep into each run's seed.
    pub base_seed: u64,
    /// Worker threads; 0 uses every core.
    pub parallel: usize,
    pub output_dir: Option<PathBuf>,
    /// Also write one CSV per run with the full trace.
    pub write_traces: bool,
    /// Shared hyperparameters. Its `seed` field is ignored: every run gets
    /// a derived seed.
    pub optimizer: OptimizerConfig,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            objectives: Vec::new(),
            optimizers: vec![OptimizerKind::ECPV2],
            reps: 100,
            base_seed: 0,
            parallel: 0,
            output_dir: None,
            write_traces: false,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl CampaignConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_json_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Parse errors carry the line and column of the offending token.
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let line = text.lines().nth(e.line().saturating_sub(1)).unwrap_or("");
            anyhow::anyhow!("{e}\n  {:>4} | {line}", e.line())
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.objectives.is_empty() {
            bail!("no objective given");
        }
        if self.optimizers.is_empty() {
            bail!("no optimizer given");
        }
        if self.reps == 0 {
            bail!("reps must be >= 1");
        }
        for name in &self.objectives {
            lipopt_core::benchmarks::lookup(name)?;
        }
        self.optimizer.validate()?;
        Ok(())
    }
}
