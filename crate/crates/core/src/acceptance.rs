//! Acceptance tests and the threshold state machine.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::archive::{Archive, ArchiveEntry};
use crate::error::{Error, Result};
use crate::projection::{squared_distance, ProjectionOperator};
use crate::space::SearchSpace;
use crate::trace::RunTrace;

/// Which relaxations of the plain ECP test are active.
///
/// With every flag off the test is the original ECP one: full archive,
/// raw threshold, raw distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AcceptanceVariant {
    /// Use `max(ε, ε⊘)` instead of `ε`, and fold the floor into `ε` at
    /// every acceptance.
    pub lower_bound: bool,
    /// Restrict the min to the worst-m entries.
    pub worst_m: bool,
    /// Compare distances in the projected space with an inflated threshold.
    pub projection: bool,
}

impl AcceptanceVariant {
    pub const ECP_FULL: Self = Self::new(false, false, false);
    pub const WITH_FLOOR: Self = Self::new(true, false, false);
    pub const WITH_WORST_M: Self = Self::new(true, true, false);
    pub const WITH_PROJECTION: Self = Self::new(true, true, true);
    pub const FULL: Self = Self::WITH_PROJECTION;

    pub const fn new(lower_bound: bool, worst_m: bool, projection: bool) -> Self {
        Self {
            lower_bound,
            worst_m,
            projection,
        }
    }

    /// The eight flag combinations, ordered as a 3-bit counter
    /// (lower_bound is the low bit).
    pub fn all() -> [Self; 8] {
        std::array::from_fn(|i| Self::new(i & 1 != 0, i & 2 != 0, i & 4 != 0))
    }

    /// Short tag such as `lb+wm`; `none` when every flag is off.
    pub fn tag(&self) -> String {
        let parts: Vec<&str> = [
            (self.lower_bound, "lb"),
            (self.worst_m, "wm"),
            (self.projection, "proj"),
        ]
        .into_iter()
        .filter_map(|(on, s)| on.then_some(s))
        .collect();
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for AcceptanceVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Threshold bookkeeping for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonState {
    eps: f64,
    floor: f64,
    h_prev: u64,
    h_curr: u64,
    tau: f64,
    patience: u64,
}

impl EpsilonState {
    /// Starts at `eps1` with counters `h_prev = 1`, `h_curr = 0`.
    pub fn new(eps1: f64, tau: f64, patience: u64) -> Result<Self> {
        if !(eps1 > 0.0) || !eps1.is_finite() {
            return Err(Error::InvalidConfig(format!("eps1 must be > 0, got {eps1}")));
        }
        if !(tau > 1.0) || !tau.is_finite() {
            return Err(Error::InvalidConfig(format!("tau must be > 1, got {tau}")));
        }
        if patience < 2 {
            return Err(Error::InvalidConfig(format!("patience must be > 1, got {patience}")));
        }
        Ok(Self {
            eps: eps1,
            floor: 0.0,
            h_prev: 1,
            h_curr: 0,
            tau,
            patience,
        })
    }

    /// Overrides both rejection counters.
    pub fn with_counters(mut self, h_prev: u64, h_curr: u64) -> Self {
        self.h_prev = h_prev;
        self.h_curr = h_curr;
        self
    }

    /// Overrides the floor, as if an acceptance had just computed it.
    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Floor computed at the latest acceptance.
    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn h_prev(&self) -> u64 {
        self.h_prev
    }

    pub fn h_curr(&self) -> u64 {
        self.h_curr
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn patience(&self) -> u64 {
        self.patience
    }

    /// Threshold actually used by the test for `variant` under `op`.
    pub fn effective(&self, variant: AcceptanceVariant, op: &ProjectionOperator) -> f64 {
        let base = if variant.lower_bound {
            self.eps.max(self.floor)
        } else {
            self.eps
        };
        if variant.projection {
            base * op.inflation()
        } else {
            base
        }
    }

    /// Counts one proposal; grows the threshold and resets `h_curr` once
    /// `h_curr − h_prev` exceeds the patience. Returns whether growth fired.
    pub fn register_proposal(&mut self) -> bool {
        self.h_curr += 1;
        // h_curr may sit below h_prev after a reset, so compare without
        // subtracting.
        if self.h_curr > self.h_prev.saturating_add(self.patience) {
            self.eps *= self.tau;
            self.h_curr = 0;
            true
        } else {
            false
        }
    }

    /// Updates the state after the accepted point was inserted in `archive`.
    pub fn register_acceptance(
        &mut self,
        archive: &Archive,
        space: &SearchSpace,
        use_floor: bool,
    ) -> Result<()> {
        self.h_prev = self.h_curr;
        self.floor = archive.epsilon_floor(space)?;
        let grown = self.tau * self.eps;
        self.eps = if use_floor { grown.max(self.floor) } else { grown };
        self.h_curr = 0;
        Ok(())
    }
}

/// Acceptance test: `min_i (f_i + ε_eff·dist_i) ≥ max_j f_j`, the min ranging
/// over the whole archive or its worst-m set depending on `variant`.
///
/// `candidate_proj` is only read when `variant.projection` is set and must
/// then equal `op.apply(candidate)`. Stops at the first violated bound.
pub fn accept(
    candidate: &[f64],
    candidate_proj: &[f64],
    archive: &Archive,
    eps: &EpsilonState,
    variant: AcceptanceVariant,
    op: &ProjectionOperator,
) -> Result<bool> {
    if archive.is_empty() {
        return Err(Error::EmptyArchive);
    }
    let eps_eff = eps.effective(variant, op);
    let best = archive.best_value();
    let holds = |e: &ArchiveEntry| {
        let d2 = if variant.projection {
            squared_distance(candidate_proj, e.projected())
        } else {
            squared_distance(candidate, &e.x)
        };
        e.value + eps_eff * d2.sqrt() >= best
    };
    Ok(if variant.worst_m {
        archive.worst_m().all(holds)
    } else {
        archive.entries().iter().all(holds)
    })
}

/// Earliest recorded evaluation whose threshold reached `k`.
pub fn hitting_time(trace: &RunTrace, k: f64) -> Option<usize> {
    trace.records.iter().find(|r| r.eps_t >= k).map(|r| r.t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    pub fraction: f64,
}

/// Fraction of one shared set of `n_candidates` uniform points passing the
/// plain ECP test, for each threshold in `eps_grid`.
pub fn acceptance_ratio_sweep<R: Rng + ?Sized>(
    archive: &Archive,
    space: &SearchSpace,
    eps_grid: &[f64],
    n_candidates: usize,
    rng: &mut R,
) -> Result<Vec<SweepPoint>> {
    if archive.is_empty() {
        return Err(Error::EmptyArchive);
    }
    if eps_grid.is_empty() || n_candidates == 0 {
        return Err(Error::InvalidConfig(
            "sweep needs a non-empty grid and at least one candidate".into(),
        ));
    }
    let candidates: Vec<Vec<f64>> = (0..n_candidates).map(|_| space.sample(rng)).collect();
    let op = ProjectionOperator::identity(space.dim());
    eps_grid
        .iter()
        .map(|&e| {
            let state = EpsilonState {
                eps: e,
                floor: 0.0,
                h_prev: 1,
                h_curr: 0,
                tau: 2.0,
                patience: 2,
            };
            let mut hits = 0usize;
            for c in &candidates {
                if accept(c, c, archive, &state, AcceptanceVariant::ECP_FULL, &op)? {
                    hits += 1;
                }
            }
            Ok(SweepPoint {
                eps: e,
                fraction: hits as f64 / n_candidates as f64,
            })
        })
        .collect()
}

/// One `(m, test point)` sample of the full-versus-worst-m bound ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiSample {
    pub m: usize,
    pub n: usize,
    pub point: usize,
    pub phi_full: f64,
    pub phi_m: f64,
    /// `phi_full / phi_m`; `None` when `phi_m == 0`.
    pub ratio: Option<f64>,
}

/// For each `m` and test point, compares `φ(x) = min_i (f_i + ε‖x − x_i‖)`
/// over the whole archive with the same min over its `m` worst entries.
pub fn phi_ratio_study(
    archive: &Archive,
    test_points: &[Vec<f64>],
    m_grid: &[usize],
    eps: f64,
) -> Result<Vec<PhiSample>> {
    let n = archive.len();
    if n == 0 {
        return Err(Error::EmptyArchive);
    }
    if let Some(&m) = m_grid.iter().find(|&&m| m == 0 || m > n) {
        return Err(Error::InvalidConfig(format!("m = {m} outside 1..={n}")));
    }
    let mut ranked: Vec<&ArchiveEntry> = archive.entries().iter().collect();
    ranked.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)));

    let phi = |x: &[f64], set: &[&ArchiveEntry]| {
        set.iter()
            .map(|e| e.value + eps * squared_distance(x, &e.x).sqrt())
            .fold(f64::INFINITY, f64::min)
    };
    let mut out = Vec::with_capacity(m_grid.len() * test_points.len());
    for (p, x) in test_points.iter().enumerate() {
        let phi_full = phi(x, &ranked);
        for &m in m_grid {
            let phi_m = if m == n { phi_full } else { phi(x, &ranked[..m]) };
            out.push(PhiSample {
                m,
                n,
                point: p,
                phi_full,
                phi_m,
                ratio: (phi_m != 0.0).then(|| phi_full / phi_m),
            });
        }
    }
    Ok(out)
}

/// Least-squares fit of `y = a·ln(x) + b`; returns `(a, b)`.
pub fn fit_log(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x.ln(), sy + y));
    let (mx, my) = (sx / k, sy / k);
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(sxx, sxy), &(x, y)| {
        let dx = x.ln() - mx;
        (sxx + dx * dx, sxy + dx * (y - my))
    });
    if sxx == 0.0 {
        return None;
    }
    let a = sxy / sxx;
    Some((a, my - a * mx))
}
