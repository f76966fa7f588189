//! Lipschitz black-box maximization with ECPv2 and its baselines.
//!
//! ECPv2 samples candidates uniformly and evaluates only those passing an
//! optimistic upper-bound test whose slope threshold grows geometrically.
//! Three optional relaxations make the test cheaper: an adaptive floor on
//! the threshold, a min over the m worst observations only, and distance
//! comparisons after a fixed Gaussian random projection.
//!
//! ```
//! use lipopt_core::{benchmarks, run_ecpv2, AcceptanceVariant, OptimizerConfig};
//!
//! let f = benchmarks::lookup("himmelblau").unwrap();
//! let cfg = OptimizerConfig::with_budget(50).with_seed(1);
//! let trace = run_ecpv2(&f, &cfg, AcceptanceVariant::FULL).unwrap();
//! assert_eq!(trace.len(), 50);
//! ```

pub mod acceptance;
pub mod archive;
pub mod benchmarks;
pub mod config;
pub mod error;
pub mod optimizers;
pub mod projection;
pub mod rng;
pub mod space;
pub mod trace;

pub use acceptance::{accept, AcceptanceVariant, EpsilonState};
pub use archive::{Archive, ArchiveEntry};
pub use config::{OptimizerConfig, Tau, TimingMode};
pub use error::{Error, Result};
pub use optimizers::{
    run_adalipo, run_ecp, run_ecpv2, run_ecpv2_observed, run_prs, FnObjective, Objective, OptimizerKind,
};
pub use projection::{required_dim, ProjectionOperator};
pub use space::SearchSpace;
pub use trace::{best_of, RunTrace, TraceRecord};
