use lipopt_core::acceptance::hitting_time;
use lipopt_core::benchmarks::lookup;
use lipopt_core::rng::derive_seed;
use lipopt_core::{
    best_of, run_adalipo, run_ecpv2, run_prs, AcceptanceVariant, FnObjective, Objective, OptimizerConfig,
    OptimizerKind, SearchSpace, Tau,
};

fn flat_run(eps1: f64, tau: f64, budget: usize) -> lipopt_core::RunTrace {
    let flat = FnObjective::new("flat", SearchSpace::hypercube(2, 0.0, 1.0).unwrap(), |_: &[f64]| 1.5);
    let cfg = OptimizerConfig {
        eps1,
        tau: Tau::Fixed(tau),
        patience: u64::MAX,
        ..OptimizerConfig::with_budget(budget)
    };
    run_ecpv2(&flat, &cfg, AcceptanceVariant::FULL).unwrap()
}

#[test]
fn hitting_time_on_constructed_runs() {
    // Every proposal is accepted on a flat objective, so row t holds
    // eps1·τ^(t−1) and the first row reaching k is the smallest such t.
    let t = flat_run(0.01, 1.1, 100);
    assert_eq!(t.total_proposals, 100);
    let closed = (1..).find(|&i| 0.01 * 1.1f64.powi(i - 1) >= 1.0).unwrap() as usize;
    assert_eq!(closed, 50);
    assert_eq!(hitting_time(&t, 1.0), Some(closed));

    assert_eq!(hitting_time(&flat_run(2.0, 1.5, 10), 1.0), Some(1));
    assert_eq!(hitting_time(&t, 1e308), None);
}

#[test]
fn every_optimizer_is_reproducible_and_exact() {
    let b = lookup("himmelblau").unwrap();
    for kind in ["ecpv2", "ecp", "prs", "adalipo", "ecpv2[wm+proj]"] {
        let kind: OptimizerKind = kind.parse().unwrap();
        let cfg = OptimizerConfig::with_budget(40).with_seed(7);
        let a = kind.run(&b, &cfg).unwrap();
        let again = kind.run(&b, &cfg).unwrap();
        assert!(a.same_outcome(&again), "{kind}");
        assert_eq!(a.len(), 40);
        assert!(a.best_so_far().zip(a.best_so_far().skip(1)).all(|(x, y)| y >= x));
        let best = best_of(&a).unwrap();
        assert_eq!(best.value, a.final_best_value);
        assert_eq!(best.t, a.final_best_t);
        let other = kind.run(&b, &cfg.clone().with_seed(8)).unwrap();
        assert!(!a.same_outcome(&other), "{kind}");
    }
}

// Red under the default hyperparameters: ECPv2 lands level with random
// search here while plain ECP does far better. Run with --ignored.
#[test]
#[ignore = "ECPv2 does not beat PRS on Rosenbrock-3D at n=200 with defaults"]
fn ecpv2_beats_random_search_on_rosenbrock3() {
    let b = lookup("rosenbrock:3").unwrap();
    let (mut e, mut p) = (0.0, 0.0);
    for rep in 0..100 {
        let cfg = OptimizerConfig::with_budget(200).with_seed(derive_seed(3, &[rep]));
        e += run_ecpv2(&b, &cfg, AcceptanceVariant::FULL).unwrap().final_best_value;
        p += run_prs(&b, &cfg).unwrap().final_best_value;
    }
    assert!(e > p, "ecpv2 {} vs prs {}", e / 100.0, p / 100.0);
}

#[test]
fn adalipo_regret_shrinks() {
    let b = lookup("himmelblau").unwrap();
    let opt = b.known_max().unwrap();
    let median = |n: usize| {
        let mut r: Vec<f64> = (0..100)
            .map(|rep| {
                let cfg = OptimizerConfig::with_budget(n).with_seed(derive_seed(5, &[rep]));
                opt - run_adalipo(&b, &cfg).unwrap().final_best_value
            })
            .collect();
        r.sort_by(f64::total_cmp);
        0.5 * (r[49] + r[50])
    };
    let (small, large) = (median(100), median(1000));
    assert!(large < small, "median regret {large} at n=1000 vs {small} at n=100");
}
