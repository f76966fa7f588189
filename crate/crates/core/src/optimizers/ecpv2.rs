use crate::acceptance::{accept, AcceptanceVariant, EpsilonState};
use crate::archive::Archive;
use crate::config::OptimizerConfig;
use crate::error::Result;
use crate::projection::ProjectionOperator;
use crate::rng::{stream, Stream};
use crate::trace::{Recorder, RunTrace};

use super::{cap_exceeded, Objective};

/// What the loop saw for one proposal, passed to the observer of
/// [`run_ecpv2_observed`] after the decision and before any insertion.
#[derive(Debug)]
pub struct ProposalEvent<'a> {
    pub candidate: &'a [f64],
    pub archive: &'a Archive,
    /// State the decision was taken with (growth already applied).
    pub eps: &'a EpsilonState,
    pub accepted: bool,
}

/// Runs ECPv2 with the given feature set.
pub fn run_ecpv2<O: Objective + ?Sized>(
    objective: &O,
    config: &OptimizerConfig,
    variant: AcceptanceVariant,
) -> Result<RunTrace> {
    run_named(objective, config, variant, &default_name(variant), &mut |_| {})
}

/// The original ECP: all ECPv2 features off.
pub fn run_ecp<O: Objective + ?Sized>(objective: &O, config: &OptimizerConfig) -> Result<RunTrace> {
    run_named(objective, config, AcceptanceVariant::ECP_FULL, "ecp", &mut |_| {})
}

/// [`run_ecpv2`] with a callback invoked on every proposal.
pub fn run_ecpv2_observed<O: Objective + ?Sized>(
    objective: &O,
    config: &OptimizerConfig,
    variant: AcceptanceVariant,
    observer: &mut dyn FnMut(&ProposalEvent<'_>),
) -> Result<RunTrace> {
    run_named(objective, config, variant, &default_name(variant), observer)
}

fn default_name(variant: AcceptanceVariant) -> String {
    super::OptimizerKind::Ecpv2(variant).name()
}

fn run_named<O: Objective + ?Sized>(
    objective: &O,
    config: &OptimizerConfig,
    variant: AcceptanceVariant,
    name: &str,
    observer: &mut dyn FnMut(&ProposalEvent<'_>),
) -> Result<RunTrace> {
    config.validate()?;
    let space = objective.space();
    let d = space.dim();
    let n = config.budget;

    let op = if variant.projection {
        let mut prng = stream(config.seed, Stream::Projection);
        ProjectionOperator::build(d, n, config.delta, config.beta, &mut prng)?
    } else {
        ProjectionOperator::identity(d)
    };
    let projecting = !op.is_identity();
    let mut rng = stream(config.seed, Stream::Candidates);
    let mut rec = Recorder::start(name, config.timing, n);
    let mut archive = Archive::new(config.m)?;
    let mut eps = EpsilonState::new(config.eps1, config.resolved_tau(d), config.patience)?;

    let mut x = vec![0.0; d];
    let mut x_proj = vec![0.0; op.target_dim()];

    space.sample_into(&mut rng, &mut x);
    rec.proposal();
    let v = rec.evaluate(|| objective.evaluate(&x));
    let proj = projecting.then(|| op.apply(&x)).transpose()?;
    archive.push(x.clone(), proj, v)?;
    rec.record(&x, v, eps.eps());

    let mut since_eval = 0u64;
    while archive.len() < n {
        space.sample_into(&mut rng, &mut x);
        if projecting {
            op.apply_into(&x, &mut x_proj)?;
        }
        rec.proposal();
        since_eval += 1;
        eps.register_proposal();
        let accepted = accept(&x, &x_proj, &archive, &eps, variant, &op)?;
        observer(&ProposalEvent {
            candidate: &x,
            archive: &archive,
            eps: &eps,
            accepted,
        });
        if !accepted {
            if let Some(cap) = config.max_proposals_per_eval {
                if since_eval >= cap {
                    return Err(cap_exceeded(cap, archive.len() + 1, rec.finish()));
                }
            }
            continue;
        }
        since_eval = 0;
        let v = rec.evaluate(|| objective.evaluate(&x));
        archive.push(x.clone(), projecting.then(|| x_proj.clone()), v)?;
        eps.register_acceptance(&archive, space, variant.lower_bound)?;
        rec.record(&x, v, eps.eps());
    }
    Ok(rec.finish())
}
