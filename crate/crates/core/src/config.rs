use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Multiplicative growth factor for the acceptance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Tau {
    /// `max(1 + 1/(n·d), 1.001)`.
    #[default]
    Auto,
    Fixed(f64),
}

impl Tau {
    pub fn resolve(self, budget: usize, dim: usize) -> f64 {
        match self {
            Tau::Auto => (1.0 + 1.0 / (budget as f64 * dim as f64)).max(1.001),
            Tau::Fixed(t) => t,
        }
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Auto => f.write_str("auto"),
            Tau::Fixed(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Tau::Auto);
        }
        s.parse::<f64>()
            .map(Tau::Fixed)
            .map_err(|_| Error::InvalidConfig(format!("tau must be `auto` or a number, got `{s}`")))
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Tau::Auto => s.serialize_str("auto"),
            Tau::Fixed(t) => s.serialize_f64(*t),
        }
    }
}

impl<'de> Deserialize<'de> for Tau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(t) => Ok(Tau::Fixed(t)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Which wall-clock the trace reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingMode {
    /// Total elapsed time, objective calls included.
    #[default]
    Full,
    /// Elapsed time minus time spent inside the objective.
    OptimizerOnly,
}

impl FromStr for TimingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TimingMode::Full),
            "optimizer-only" => Ok(TimingMode::OptimizerOnly),
            _ => Err(Error::InvalidConfig(format!(
                "timing must be `full` or `optimizer-only`, got `{s}`"
            ))),
        }
    }
}

/// Hyperparameters shared by every optimizer in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Number of objective evaluations.
    pub budget: usize,
    /// Worst-m memory size.
    pub m: usize,
    /// Projection distortion, in `[0, 1)`.
    pub delta: f64,
    /// Projection confidence scale, `> 1`.
    pub beta: f64,
    /// Initial acceptance threshold.
    pub eps1: f64,
    pub tau: Tau,
    /// Rejections tolerated before the threshold grows (`C`).
    pub patience: u64,
    pub seed: u64,
    /// Abort when this many consecutive proposals are rejected.
    pub max_proposals_per_eval: Option<u64>,
    /// AdaLIPO exploration probability.
    pub adalipo_p: f64,
    /// AdaLIPO grid step: Lipschitz estimates live on `(1 + alpha)^i`.
    pub adalipo_alpha: f64,
    pub timing: TimingMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            budget: 1000,
            m: 8,
            delta: 2.0 / 3.0,
            beta: 5.0,
            eps1: 0.01,
            tau: Tau::Auto,
            patience: 1000,
            seed: 0,
            max_proposals_per_eval: None,
            adalipo_p: 0.1,
            adalipo_alpha: 0.01,
            timing: TimingMode::Full,
        }
    }
}

impl OptimizerConfig {
    pub fn with_budget(budget: usize) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn resolved_tau(&self, dim: usize) -> f64 {
        self.tau.resolve(self.budget, dim)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.budget == 0 {
            return bad("budget must be >= 1".into());
        }
        if self.m == 0 {
            return bad("m must be >= 1".into());
        }
        if !(0.0..1.0).contains(&self.delta) {
            return bad(format!("delta must lie in [0, 1), got {}", self.delta));
        }
        if !(self.beta > 1.0) || !self.beta.is_finite() {
            return bad(format!("beta must be > 1, got {}", self.beta));
        }
        if !(self.eps1 > 0.0) || !self.eps1.is_finite() {
            return bad(format!("eps1 must be > 0, got {}", self.eps1));
        }
        if let Tau::Fixed(t) = self.tau {
            if !(t > 1.0) || !t.is_finite() {
                return bad(format!("tau must be > 1, got {t}"));
            }
        }
        if self.patience < 2 {
            return bad(format!("patience must be > 1, got {}", self.patience));
        }
        if self.max_proposals_per_eval == Some(0) {
            return bad("max_proposals_per_eval must be positive".into());
        }
        if !(self.adalipo_p > 0.0 && self.adalipo_p < 1.0) {
            return bad(format!("adalipo_p must lie in (0, 1), got {}", self.adalipo_p));
        }
        if !(self.adalipo_alpha > 0.0) || !self.adalipo_alpha.is_finite() {
            return bad(format!("adalipo_alpha must be > 0, got {}", self.adalipo_alpha));
        }
        Ok(())
    }
}
