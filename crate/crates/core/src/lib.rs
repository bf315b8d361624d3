//! Minimum sum-rates for cooperative data exchange.
//!
//! `K` clients each hold part of an `L`-packet set and broadcast coded
//! packets until everyone holds everything. This crate computes the exact
//! minimum number of transmissions (with and without packet splitting) by
//! enumerating client partitions, a fast greedy lower bound, two classical
//! lower bounds, and brute-force feasibility oracles to check them against.
//!
//! - [`instance`]: the system model, the cut function `g`, subset and
//!   partition enumeration.
//! - [`bounds`]: exact minimum sum-rates and lower bounds.
//! - [`feasibility`]: direct recovery checks and integer strategy search.
//! - [`harness`]: seeded Monte-Carlo tightness experiments with CSV output.
//! - [`cli`]: instance files and the commands behind the `cde` binary.

pub mod bounds;
pub mod cli;
pub mod feasibility;
pub mod harness;
pub mod instance;
pub mod rate;

pub use bounds::{
    algorithm1_beta, alpha_hat, exact_min_sum_rate_chan, exact_min_sum_rate_nps,
    exact_min_sum_rate_ps, lb_roua, lb_sprint, BoundReport, ExactConfig,
};
pub use feasibility::{
    alpha_feasible, brute_force_min_sum_rate_nps, enumerate_strategies, strategy_achieves_recovery,
    FeasibilityVerdict, Mode, Strategy,
};
pub use instance::{
    enumerate_partitions, enumerate_subsets, validate_instance, ClientSubset, CutFunction,
    Instance, Partition,
};
pub use rate::Rate;
