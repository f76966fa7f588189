use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::config::TimingMode;

/// One accepted evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// 1-based evaluation ordinal.
    pub t: usize,
    /// Objective value of this evaluation.
    pub value: f64,
    pub best_so_far: f64,
    /// Threshold in force once evaluation `t` has been registered. For
    /// AdaLIPO this column carries the Lipschitz estimate instead.
    pub eps_t: f64,
    /// Cumulative candidates drawn, this evaluation included.
    pub proposals: u64,
    pub elapsed_seconds: f64,
}

/// Full record of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub optimizer: String,
    pub records: Vec<TraceRecord>,
    pub final_best_x: Vec<f64>,
    pub final_best_value: f64,
    /// Ordinal of `final_best_x`.
    pub final_best_t: usize,
    pub total_proposals: u64,
    pub total_seconds: f64,
    /// Time spent inside the objective, whatever the timing mode.
    pub objective_seconds: f64,
}

/// Best evaluation of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Best<'a> {
    pub t: usize,
    pub value: f64,
    pub x: &'a [f64],
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn best_so_far(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.best_so_far)
    }

    /// True when both traces agree on every field except wall-clock timings.
    pub fn same_outcome(&self, other: &RunTrace) -> bool {
        let strip = |r: &TraceRecord| (r.t, r.value.to_bits(), r.best_so_far.to_bits(), r.eps_t.to_bits(), r.proposals);
        self.optimizer == other.optimizer
            && self.final_best_x == other.final_best_x
            && self.final_best_value.to_bits() == other.final_best_value.to_bits()
            && self.final_best_t == other.final_best_t
            && self.total_proposals == other.total_proposals
            && self.records.len() == other.records.len()
            && self.records.iter().map(strip).eq(other.records.iter().map(strip))
    }
}

/// The evaluation with maximal value, lowest ordinal on ties.
pub fn best_of(trace: &RunTrace) -> Option<Best<'_>> {
    let mut best: Option<&TraceRecord> = None;
    for r in &trace.records {
        if best.is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.map(|r| Best {
        t: r.t,
        value: r.value,
        x: if r.t == trace.final_best_t {
            &trace.final_best_x
        } else {
            &[]
        },
    })
}

/// Builds a [`RunTrace`] while an optimizer runs and owns its clock.
#[derive(Debug)]
pub(crate) struct Recorder {
    optimizer: String,
    timing: TimingMode,
    start: Instant,
    in_objective: Duration,
    records: Vec<TraceRecord>,
    best_x: Vec<f64>,
    best_value: f64,
    best_t: usize,
    proposals: u64,
}

impl Recorder {
    pub(crate) fn start(optimizer: impl Into<String>, timing: TimingMode, capacity: usize) -> Self {
        Self {
            optimizer: optimizer.into(),
            timing,
            start: Instant::now(),
            in_objective: Duration::ZERO,
            records: Vec::with_capacity(capacity),
            best_x: Vec::new(),
            best_value: f64::NEG_INFINITY,
            best_t: 0,
            proposals: 0,
        }
    }

    pub(crate) fn proposal(&mut self) -> u64 {
        self.proposals += 1;
        self.proposals
    }

    pub(crate) fn evaluations(&self) -> usize {
        self.records.len()
    }

    /// Times a single objective call.
    pub(crate) fn evaluate(&mut self, f: impl FnOnce() -> f64) -> f64 {
        let t0 = Instant::now();
        let v = f();
        self.in_objective += t0.elapsed();
        v
    }

    fn elapsed(&self) -> f64 {
        let total = self.start.elapsed();
        match self.timing {
            TimingMode::Full => total.as_secs_f64(),
            TimingMode::OptimizerOnly => total.saturating_sub(self.in_objective).as_secs_f64(),
        }
    }

    pub(crate) fn record(&mut self, x: &[f64], value: f64, eps_t: f64) {
        let t = self.records.len() + 1;
        if value > self.best_value {
            self.best_value = value;
            self.best_t = t;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        let elapsed_seconds = self.elapsed();
        self.records.push(TraceRecord {
            t,
            value,
            best_so_far: self.best_value,
            eps_t,
            proposals: self.proposals,
            elapsed_seconds,
        });
    }

    pub(crate) fn finish(self) -> RunTrace {
        let total_seconds = self.elapsed();
        RunTrace {
            optimizer: self.optimizer,
            final_best_value: self.best_value,
            final_best_t: self.best_t,
            final_best_x: self.best_x,
            records: self.records,
            total_proposals: self.proposals,
            total_seconds,
            objective_seconds: self.in_objective.as_secs_f64(),
        }
    }
}
