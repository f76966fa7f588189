//! Optimizer loops. All optimizers maximize.

mod adalipo;
mod ecpv2;
mod prs;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::acceptance::AcceptanceVariant;
use crate::config::OptimizerConfig;
use crate::error::{Error, Result};
use crate::space::SearchSpace;
use crate::trace::RunTrace;

pub use adalipo::{lipschitz_grid_value, run_adalipo};
pub use ecpv2::{run_ecp, run_ecpv2, run_ecpv2_observed, ProposalEvent};
pub use prs::run_prs;

/// Deterministic black-box function to maximize over a box.
pub trait Objective {
    fn name(&self) -> &str;

    fn space(&self) -> &SearchSpace;

    fn evaluate(&self, x: &[f64]) -> f64;

    /// Global maximum, when known.
    fn known_max(&self) -> Option<f64> {
        None
    }

    fn dim(&self) -> usize {
        self.space().dim()
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn space(&self) -> &SearchSpace {
        (**self).space()
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        (**self).evaluate(x)
    }
    fn known_max(&self) -> Option<f64> {
        (**self).known_max()
    }
}

/// Wraps a closure as an [`Objective`].
pub struct FnObjective<F> {
    name: String,
    space: SearchSpace,
    f: F,
    known_max: Option<f64>,
}

impl<F: Fn(&[f64]) -> f64> FnObjective<F> {
    pub fn new(name: impl Into<String>, space: SearchSpace, f: F) -> Self {
        Self {
            name: name.into(),
            space,
            f,
            known_max: None,
        }
    }

    pub fn with_known_max(mut self, v: f64) -> Self {
        self.known_max = Some(v);
        self
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for FnObjective<F> {
    fn name(&self) -> &str {
        &self.name
    }
    fn space(&self) -> &SearchSpace {
        &self.space
    }
    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn known_max(&self) -> Option<f64> {
        self.known_max
    }
}

/// Optimizer selector used by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum OptimizerKind {
    Ecpv2(AcceptanceVariant),
    /// ECPv2 with every feature off, reported under its own name.
    Ecp,
    Prs,
    AdaLipo,
}

impl OptimizerKind {
    pub const ECPV2: Self = OptimizerKind::Ecpv2(AcceptanceVariant::FULL);

    /// `ecpv2`, `ecpv2[lb+wm]`, `ecp`, `prs` or `adalipo`.
    pub fn name(&self) -> String {
        match self {
            OptimizerKind::Ecpv2(v) if *v == AcceptanceVariant::FULL => "ecpv2".into(),
            OptimizerKind::Ecpv2(v) => format!("ecpv2[{v}]"),
            OptimizerKind::Ecp => "ecp".into(),
            OptimizerKind::Prs => "prs".into(),
            OptimizerKind::AdaLipo => "adalipo".into(),
        }
    }

    /// Name mixed into the harness seed. ECP and every ECPv2 variant share
    /// one so their runs see the same candidate stream.
    pub fn seed_label(&self) -> &'static str {
        match self {
            OptimizerKind::Ecpv2(_) | OptimizerKind::Ecp => "ecp-family",
            OptimizerKind::Prs => "prs",
            OptimizerKind::AdaLipo => "adalipo",
        }
    }

    pub fn run<O: Objective + ?Sized>(&self, objective: &O, config: &OptimizerConfig) -> Result<RunTrace> {
        match *self {
            OptimizerKind::Ecpv2(v) => run_ecpv2(objective, config, v),
            OptimizerKind::Ecp => run_ecp(objective, config),
            OptimizerKind::Prs => run_prs(objective, config),
            OptimizerKind::AdaLipo => run_adalipo(objective, config),
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "ecpv2" => return Ok(Self::ECPV2),
            "ecp" => return Ok(OptimizerKind::Ecp),
            "prs" => return Ok(OptimizerKind::Prs),
            "adalipo" => return Ok(OptimizerKind::AdaLipo),
            _ => {}
        }
        let flags = lower
            .strip_prefix("ecpv2[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown optimizer `{s}`")))?;
        let mut v = AcceptanceVariant::ECP_FULL;
        if flags != "none" {
            for f in flags.split('+') {
                match f {
                    "lb" => v.lower_bound = true,
                    "wm" => v.worst_m = true,
                    "proj" => v.projection = true,
                    _ => return Err(Error::InvalidConfig(format!("unknown feature `{f}` in `{s}`"))),
                }
            }
        }
        Ok(OptimizerKind::Ecpv2(v))
    }
}

impl TryFrom<String> for OptimizerKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<OptimizerKind> for String {
    fn from(k: OptimizerKind) -> Self {
        k.name()
    }
}

/// Error for a run that drew `cap` consecutive rejected candidates.
pub(crate) fn cap_exceeded(cap: u64, evaluation: usize, partial: RunTrace) -> Error {
    Error::ProposalCapExceeded {
        cap,
        evaluation,
        partial: Box::new(partial),
    }
}
