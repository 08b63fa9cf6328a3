//! The optimization loop with a frozen prior, its baselines, and reporting.

pub mod bounds;
pub mod engine;
pub mod oracle;
pub mod profile;
pub mod trace;

pub use bounds::{information_gain, regret_bound_pi, regret_bound_ucb, rho_t, RegretBoundInputs};
pub use engine::{run_bo, run_random, run_stbo, run_stbo_logged, simple_regret, StboLog, METHOD_RANDOM, METHOD_STBO};
pub use oracle::{FnOracle, Oracle, SyntheticOracle, TableOracle};
pub use profile::{criterion_values, performance_profile, profile_to_csv, Criterion, Curves, ProfileRow};
pub use trace::{parse_trace_csv, BoStep, BoTrace, TraceRows};
