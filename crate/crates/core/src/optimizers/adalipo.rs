use rand::Rng;

use crate::config::OptimizerConfig;
use crate::error::{Error, Result};
use crate::projection::squared_distance;
use crate::rng::{stream, Stream};
use crate::trace::{Recorder, RunTrace};

use super::{cap_exceeded, Objective};

/// Smallest `(1 + alpha)^i`, `i ∈ ℤ`, that is `≥ slope`; 0 for a zero slope.
pub fn lipschitz_grid_value(slope: f64, alpha: f64) -> f64 {
    if slope <= 0.0 {
        return 0.0;
    }
    let base = 1.0 + alpha;
    let mut i = (slope.ln() / base.ln()).ceil() as i32;
    // Correct for rounding in the logarithm.
    while base.powi(i) < slope {
        i += 1;
    }
    while base.powi(i - 1) >= slope {
        i -= 1;
    }
    base.powi(i)
}

/// AdaLIPO: explore uniformly with probability `adalipo_p`, otherwise
/// rejection-sample a potential maximizer under the current Lipschitz
/// estimate. The threshold column of the trace holds that estimate.
pub fn run_adalipo<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<RunTrace> {
    config.validate()?;
    let space = objective.space();
    let n = config.budget;
    let alpha = config.adalipo_alpha;
    let mut rng = stream(config.seed, Stream::Candidates);
    let mut coin = stream(config.seed, Stream::Exploration);
    let mut rec = Recorder::start("adalipo", config.timing, n);

    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut fs: Vec<f64> = Vec::with_capacity(n);
    let mut best = f64::NEG_INFINITY;
    let mut max_slope = 0.0f64;
    let mut k_hat = 0.0f64;
    let mut x = vec![0.0; space.dim()];

    while xs.len() < n {
        let explore = !xs.is_empty() && coin.random::<f64>() < config.adalipo_p;
        let mut tries = 0u64;
        loop {
            space.sample_into(&mut rng, &mut x);
            rec.proposal();
            tries += 1;
            if xs.is_empty() || explore || potential_maximizer(&x, &xs, &fs, k_hat, best) {
                break;
            }
            if let Some(cap) = config.max_proposals_per_eval {
                if tries >= cap {
                    return Err(cap_exceeded(cap, xs.len() + 1, rec.finish()));
                }
            }
        }
        let v = rec.evaluate(|| objective.evaluate(&x));
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                index: xs.len() + 1,
                value: v,
            });
        }
        for (xi, &fi) in xs.iter().zip(&fs) {
            let dist = squared_distance(&x, xi).sqrt();
            if dist > 0.0 {
                max_slope = max_slope.max((v - fi).abs() / dist);
            }
        }
        k_hat = lipschitz_grid_value(max_slope, alpha);
        best = best.max(v);
        xs.push(x.clone());
        fs.push(v);
        rec.record(&x, v, k_hat);
    }
    Ok(rec.finish())
}

fn potential_maximizer(x: &[f64], xs: &[Vec<f64>], fs: &[f64], k: f64, best: f64) -> bool {
    xs.iter()
        .zip(fs)
        .all(|(xi, fi)| fi + k * squared_distance(x, xi).sqrt() >= best)
}
