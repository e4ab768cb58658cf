//! Probability of r-core formation in k-uniform random hypergraphs.
//!
//! * [`numerics`]: exact binomial coefficients, binomial pmf/cdf, compensated sums.
//! * [`hypergraph`]: sampling, peeling and induced-subgraph predicates.
//! * [`local_prob`]: probability of a core on one fixed vertex subset
//!   (connectivity recursion, Gilbert's recursion, covering heuristic).
//! * [`global_prob`]: exactly-one composition, geometric bound and
//!   interleaving bounds on forming a core anywhere.
//! * [`montecarlo`]: seeded estimates and exhaustive oracles.
//! * [`sweep`]: parameter sweeps and breakdown scans.
//!
//! Every probability is returned as a [`ProbValue`]; values that leave
//! `[0, 1]` are flagged rather than clamped.

pub mod error;
pub mod global_prob;
pub mod hypergraph;
pub mod local_prob;
pub mod montecarlo;
pub mod numerics;
pub mod par;
pub mod prob;
pub mod sweep;

pub use error::{Error, Result};
pub use global_prob::{
    at_least_one_bound, exactly_one_core, interleaving_bounds, GlobalResult, GlobalSolver, LocalMethod,
    LocalProvider, SizeTerm,
};
pub use hypergraph::{enumerate_all, generate, EdgeCatalog, Hypergraph, HypergraphParams, Seed};
pub use local_prob::{
    connectivity_prob, covering_prob, cross_edge_count, gilbert_prob, interleaved_local_prob,
    ConnectivityTable, LocalContext, LocalQuery,
};
pub use montecarlo::{
    exact_exactly_one, exact_global, mc_global, mc_local, CoreSemantics, LocalPredicate, McEstimate, McPlan,
};
pub use numerics::{binom_cdf, binom_pmf, choose, stable_sum, BinomialDist};
pub use par::Execution;
pub use prob::{Diagnostic, ProbValue};
pub use sweep::{run_sweep, scan_breakdown, Method, Scope, SweepResult, SweepRow, SweepSpec};
