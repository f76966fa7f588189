use crate::config::OptimizerConfig;
use crate::error::Result;
use crate::rng::{stream, Stream};
use crate::trace::{Recorder, RunTrace};

use super::Objective;

/// Pure random search: `budget` i.i.d. uniform evaluations. The threshold
/// column of the trace is 0.
pub fn run_prs<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<RunTrace> {
    config.validate()?;
    let space = objective.space();
    let mut rng = stream(config.seed, Stream::Candidates);
    let mut rec = Recorder::start("prs", config.timing, config.budget);
    let mut x = vec![0.0; space.dim()];
    for _ in 0..config.budget {
        space.sample_into(&mut rng, &mut x);
        rec.proposal();
        let v = rec.evaluate(|| objective.evaluate(&x));
        if !v.is_finite() {
            return Err(crate::error::Error::NonFiniteValue {
                index: rec.evaluations() + 1,
                value: v,
            });
        }
        rec.record(&x, v, 0.0);
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::AcceptanceVariant;
    use crate::optimizers::{run_ecpv2, FnObjective};
    use crate::space::SearchSpace;

    fn objective() -> FnObjective<impl Fn(&[f64]) -> f64> {
        FnObjective::new("lin", SearchSpace::hypercube(3, 0.0, 2.0).unwrap(), |x: &[f64]| {
            x[0] - 2.0 * x[1] + x[2].sin()
        })
    }

    #[test]
    fn first_point_matches_ecpv2() {
        let cfg = OptimizerConfig::with_budget(1).with_seed(77);
        let p = run_prs(&objective(), &cfg).unwrap();
        let e = run_ecpv2(&objective(), &cfg, AcceptanceVariant::FULL).unwrap();
        assert_eq!(p.final_best_x, e.final_best_x);
        assert_eq!(p.records[0].value, e.records[0].value);
    }

    #[test]
    fn exact_budget_and_monotone_best() {
        let t = run_prs(&objective(), &OptimizerConfig::with_budget(250)).unwrap();
        assert_eq!(t.len(), 250);
        assert_eq!(t.total_proposals, 250);
        assert!(t.records.windows(2).all(|w| w[0].best_so_far <= w[1].best_so_far));
    }
}
