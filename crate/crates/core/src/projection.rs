//! Fixed Gaussian random projection used to compare distances in a lower
//! dimensional space, plus the empirical distortion study.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SearchSpace;

/// Target dimension `⌈8 ln(βn) / (δ² − δ³)⌉` at which all pairwise squared
/// distances among `n` points stay within `[1 − δ, 1 + δ]` with probability
/// at least `1 − 1/β²`.
///
/// `delta` must lie strictly inside `(0, 1)`; at `delta == 0` the caller is
/// expected to use the identity instead.
pub fn required_dim(n: usize, beta: f64, delta: f64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidConfig("point count must be >= 1".into()));
    }
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(Error::InvalidConfig(format!("beta must be > 1, got {beta}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "required_dim needs delta in (0, 1), got {delta}"
        )));
    }
    let raw = 8.0 * (beta * n as f64).ln() / (delta * delta - delta * delta * delta);
    Ok(raw.ceil().max(1.0) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectionMode {
    Identity,
    Gaussian,
}

/// Linear map `ℝ^d → ℝ^{d'}`: either the identity or `Rᵀ/√d'` with `R`
/// an i.i.d. standard normal `d × d'` matrix. Never changes after `build`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOperator {
    mode: ProjectionMode,
    d: usize,
    d_prime: usize,
    delta: f64,
    beta: f64,
    /// Row-major `d' × d`; empty in identity mode.
    matrix: Vec<f64>,
    inflation: f64,
}

impl ProjectionOperator {
    pub fn identity(d: usize) -> Self {
        Self {
            mode: ProjectionMode::Identity,
            d,
            d_prime: d,
            delta: 0.0,
            beta: f64::NAN,
            matrix: Vec::new(),
            inflation: 1.0,
        }
    }

    /// Builds the operator for a run of `n` evaluations in dimension `d`.
    ///
    /// Falls back to the identity when `delta == 0` or when the required
    /// target dimension is not smaller than `d`. Matrix entries are drawn
    /// row by row from `rng`.
    pub fn build<R: Rng + ?Sized>(
        d: usize,
        n: usize,
        delta: f64,
        beta: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidConfig("source dimension must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidConfig(format!("delta must lie in [0, 1), got {delta}")));
        }
        if !(beta > 1.0) || !beta.is_finite() {
            return Err(Error::InvalidConfig(format!("beta must be > 1, got {beta}")));
        }
        if delta == 0.0 {
            return Ok(Self::identity(d));
        }
        let d_prime = required_dim(n, beta, delta)?;
        if d <= d_prime {
            return Ok(Self {
                beta,
                ..Self::identity(d)
            });
        }
        let scale = 1.0 / (d_prime as f64).sqrt();
        let matrix = (0..d_prime * d)
            .map(|_| rng.sample::<f64, _>(StandardNormal) * scale)
            .collect();
        Ok(Self {
            mode: ProjectionMode::Gaussian,
            d,
            d_prime,
            delta,
            beta,
            matrix,
            inflation: 1.0 / (1.0 - delta).sqrt(),
        })
    }

    pub fn mode(&self) -> ProjectionMode {
        self.mode
    }

    pub fn is_identity(&self) -> bool {
        self.mode == ProjectionMode::Identity
    }

    pub fn source_dim(&self) -> usize {
        self.d
    }

    pub fn target_dim(&self) -> usize {
        self.d_prime
    }

    /// Distortion in effect: `delta` in Gaussian mode, zero under identity.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Threshold multiplier `1/√(1 − δ)` applied to projected distances;
    /// exactly 1 under identity.
    pub fn inflation(&self) -> f64 {
        self.inflation
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.d_prime];
        self.apply_into(x, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        if out.len() != self.d_prime {
            return Err(Error::DimensionMismatch {
                expected: self.d_prime,
                got: out.len(),
            });
        }
        match self.mode {
            ProjectionMode::Identity => out.copy_from_slice(x),
            ProjectionMode::Gaussian => {
                for (o, row) in out.iter_mut().zip(self.matrix.chunks_exact(self.d)) {
                    *o = dot(row, x);
                }
            }
        }
        Ok(())
    }
}

/// Dot product with eight independent accumulators so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail
}

/// Parameters of [`distortion_study`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistortionStudy {
    pub n_points: usize,
    pub d: usize,
    pub delta: f64,
    pub beta: f64,
    pub trials: usize,
    /// Keep every pairwise ratio (`n_points·(n_points−1)/2` per trial).
    pub keep_ratios: bool,
}

/// One pairwise squared-distance ratio `‖Pu − Pv‖² / ‖u − v‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub trial: usize,
    pub pair_i: usize,
    pub pair_j: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    pub d_prime: usize,
    pub mode: ProjectionMode,
    /// Per trial: every pair stayed within `[1 − δ, 1 + δ]`.
    pub success: Vec<bool>,
    pub ratio_count: u64,
    pub ratio_mean: f64,
    pub ratio_variance: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Populated only when `keep_ratios` was set.
    pub ratios: Vec<RatioSample>,
}

impl DistortionReport {
    pub fn success_rate(&self) -> f64 {
        if self.success.is_empty() {
            return 0.0;
        }
        self.success.iter().filter(|&&s| s).count() as f64 / self.success.len() as f64
    }
}

/// Empirical check of the pairwise distortion bound.
///
/// Each trial draws `n_points` fresh points uniformly from `[0, 1]^d` and a
/// fresh operator sized for `n_points` evaluations, then compares every
/// pairwise squared distance before and after projection.
pub fn distortion_study<R: Rng + ?Sized>(
    study: &DistortionStudy,
    rng: &mut R,
) -> Result<DistortionReport> {
    if study.n_points < 2 {
        return Err(Error::InvalidConfig("distortion study needs at least 2 points".into()));
    }
    if study.trials == 0 {
        return Err(Error::InvalidConfig("distortion study needs at least 1 trial".into()));
    }
    let cube = SearchSpace::hypercube(study.d, 0.0, 1.0)?;
    let (lo, hi) = (1.0 - study.delta, 1.0 + study.delta);

    let mut success = Vec::with_capacity(study.trials);
    let mut ratios = Vec::new();
    let (mut count, mut mean, mut m2) = (0u64, 0.0f64, 0.0f64);
    let (mut rmin, mut rmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut d_prime = study.d;
    let mut mode = ProjectionMode::Identity;

    for trial in 0..study.trials {
        let op = ProjectionOperator::build(study.d, study.n_points, study.delta, study.beta, rng)?;
        d_prime = op.target_dim();
        mode = op.mode();
        let points: Vec<Vec<f64>> = (0..study.n_points).map(|_| cube.sample(rng)).collect();
        let projected = points
            .iter()
            .map(|p| op.apply(p))
            .collect::<Result<Vec<_>>>()?;

        let mut ok = true;
        for i in 0..study.n_points {
            for j in (i + 1)..study.n_points {
                let ratio = squared_distance(&projected[i], &projected[j])
                    / squared_distance(&points[i], &points[j]);
                ok &= lo <= ratio && ratio <= hi;
                count += 1;
                let delta = ratio - mean;
                mean += delta / count as f64;
                m2 += delta * (ratio - mean);
                rmin = rmin.min(ratio);
                rmax = rmax.max(ratio);
                if study.keep_ratios {
                    ratios.push(RatioSample {
                        trial,
                        pair_i: i,
                        pair_j: j,
                        ratio,
                    });
                }
            }
        }
        success.push(ok);
    }

    Ok(DistortionReport {
        d_prime,
        mode,
        success,
        ratio_count: count,
        ratio_mean: mean,
        ratio_variance: if count > 1 { m2 / (count - 1) as f64 } else { 0.0 },
        ratio_min: rmin,
        ratio_max: rmax,
        ratios,
    })
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            let t = x[k] - y[k];
            acc[k] += t * t;
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}
