//! Seeded Monte Carlo estimates and exhaustive small-instance oracles.
//!
//! Trials run in blocks of [`BLOCK_SIZE`]. Block `i` draws from its own
//! generator seeded with `master.derive(i)` (see [`Seed::derive`]), so the
//! totals do not depend on how blocks are scheduled across threads, and runs
//! over disjoint block ranges merge to the full-run result.

use std::ops::Range;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{
    EdgeCatalog, HypergraphParams, Seed, ENUMERATE_MAX_CANDIDATES, GENERATE_MAX_CANDIDATES,
};
use crate::local_prob::LocalQuery;
use crate::numerics::stable_sum;
use crate::par::{self, Execution};

pub const BLOCK_SIZE: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub successes: u64,
    pub trials: u64,
    pub mean: f64,
    /// Binomial standard error `sqrt(mean (1 - mean) / trials)`.
    pub stderr: f64,
    pub seed: Seed,
}

impl McEstimate {
    pub fn new(successes: u64, trials: u64, seed: Seed) -> Self {
        assert!(trials > 0, "an estimate needs at least one trial");
        let mean = successes as f64 / trials as f64;
        let stderr = (mean * (1.0 - mean) / trials as f64).sqrt();
        Self { successes, trials, mean, stderr, seed }
    }

    /// Pools two partial runs of the same experiment.
    pub fn merge(&self, other: &McEstimate) -> McEstimate {
        McEstimate::new(self.successes + other.successes, self.trials + other.trials, self.seed)
    }

    /// Whether `x` lies within `sigmas` standard errors of the mean.
    pub fn covers(&self, x: f64, sigmas: f64) -> bool {
        (self.mean - x).abs() <= sigmas * self.stderr
    }
}

/// What counts as success in a local trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalPredicate {
    /// All `u` vertices connected (`r` is ignored).
    Connectivity,
    /// Every vertex has degree at least `r`.
    MinDegree,
}

/// Trial count and block layout of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McPlan {
    pub trials: u64,
    pub seed: Seed,
}

impl McPlan {
    pub fn new(trials: u64, seed: Seed) -> Result<Self> {
        if trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        Ok(Self { trials, seed })
    }

    pub fn blocks(&self) -> u64 {
        self.trials.div_ceil(BLOCK_SIZE)
    }

    fn block_len(&self, b: u64) -> u64 {
        BLOCK_SIZE.min(self.trials - b * BLOCK_SIZE)
    }

    /// Runs the blocks in `range` (clamped to the plan), each with its
    /// derived seed.
    pub fn run<F>(&self, range: Range<u64>, exec: Execution, trial: F) -> Result<McEstimate>
    where
        F: Fn(&mut ChaCha8Rng) -> bool + Sync,
    {
        let range = range.start.min(self.blocks())..range.end.min(self.blocks());
        if range.is_empty() {
            return Err(Error::InvalidParams("block range selects no trials".into()));
        }
        let (successes, trials) = par::map_sum(range, exec, |b| {
            let mut rng = self.seed.derive(b).rng();
            let n = self.block_len(b);
            let hits = (0..n).filter(|_| trial(&mut rng)).count() as u64;
            (hits, n)
        });
        Ok(McEstimate::new(successes, trials, self.seed))
    }

    pub fn run_all<F>(&self, exec: Execution, trial: F) -> Result<McEstimate>
    where
        F: Fn(&mut ChaCha8Rng) -> bool + Sync,
    {
        self.run(0..self.blocks(), exec, trial)
    }
}

/// Estimates the local probability: hypergraphs on exactly `u` vertices,
/// success when `predicate` holds on the full vertex set.
pub fn mc_local(
    query: &LocalQuery,
    predicate: LocalPredicate,
    trials: u64,
    seed: Seed,
) -> Result<McEstimate> {
    mc_local_with(query, predicate, &McPlan::new(trials, seed)?, 0..u64::MAX, Execution::default())
}

pub fn mc_local_with(
    query: &LocalQuery,
    predicate: LocalPredicate,
    plan: &McPlan,
    blocks: Range<u64>,
    exec: Execution,
) -> Result<McEstimate> {
    let catalog = EdgeCatalog::new(query.u, query.k, GENERATE_MAX_CANDIDATES)?;
    let all: Vec<u32> = (0..query.u).collect();
    let r = query.r;
    plan.run(blocks, exec, |rng| {
        let h = catalog.sample(query.p, rng);
        match predicate {
            LocalPredicate::Connectivity => h.is_connected_on(&all).expect("nonempty vertex set"),
            LocalPredicate::MinDegree => h.has_rcore_on(&all, r).expect("nonempty vertex set"),
        }
    })
}

/// Estimates the probability that any r-core forms: success when peeling
/// leaves a nonempty vertex set.
pub fn mc_global(params: &HypergraphParams, trials: u64, seed: Seed) -> Result<McEstimate> {
    mc_global_with(params, &McPlan::new(trials, seed)?, 0..u64::MAX, Execution::default())
}

pub fn mc_global_with(
    params: &HypergraphParams,
    plan: &McPlan,
    blocks: Range<u64>,
    exec: Execution,
) -> Result<McEstimate> {
    let catalog = EdgeCatalog::new(params.v(), params.k(), GENERATE_MAX_CANDIDATES)?;
    let r = params.r();
    plan.run(blocks, exec, |rng| !catalog.sample(params.p(), rng).peel(r).is_empty())
}

/// Which r-core vertex sets [`exact_exactly_one`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreSemantics {
    /// Inclusion-minimal vertex sets whose induced subgraph has min degree `>= r`.
    Minimal,
    /// Connected components of the maximal r-core (the peeling survivors).
    Maximal,
}

/// Exact probability that some r-core forms, by enumerating every
/// hypergraph on `v` vertices.
pub fn exact_global(params: &HypergraphParams) -> Result<f64> {
    let r = params.r();
    enumerate_weighted(params, |g| g.peel(r) != 0)
}

/// Exact probability that exactly one r-core forms under `semantics`.
pub fn exact_exactly_one(params: &HypergraphParams, semantics: CoreSemantics) -> Result<f64> {
    let r = params.r();
    enumerate_weighted(params, |g| match semantics {
        CoreSemantics::Minimal => g.minimal_core_count(r) == 1,
        CoreSemantics::Maximal => {
            let core = g.peel(r);
            core != 0 && g.component_count(core) == 1
        }
    })
}

// Sums P(H) over the hypergraphs satisfying `indicator`. Hits are counted
// per edge count, then weighted by p^m (1-p)^(M-m).
fn enumerate_weighted<F>(params: &HypergraphParams, indicator: F) -> Result<f64>
where
    F: Fn(&MaskGraph) -> bool + Sync,
{
    let catalog = EdgeCatalog::new(params.v(), params.k(), ENUMERATE_MAX_CANDIDATES)?;
    let m = catalog.len();
    let edge_masks: Vec<u64> = catalog.iter().map(|e| e.iter().fold(0u64, |a, &x| a | 1 << x)).collect();
    let v = params.v();
    let counts = par::map_reduce_vec(0..1u64 << m, m + 1, Execution::default(), |mask, counts| {
        let g = MaskGraph::new(v, &edge_masks, mask);
        if indicator(&g) {
            counts[mask.count_ones() as usize] += 1;
        }
    });
    let weights = edge_count_weights(params.p(), m);
    Ok(stable_sum(counts.iter().zip(&weights).map(|(&c, &w)| c as f64 * w)))
}

/// `p^j (1-p)^(m-j)` for `j = 0..=m`, via logs.
fn edge_count_weights(p: f64, m: usize) -> Vec<f64> {
    (0..=m)
        .map(|j| {
            let (a, b) = (j as f64, (m - j) as f64);
            let term = |n: f64, q: f64| if n == 0.0 { 0.0 } else { n * q.ln() };
            (term(a, p) + term(b, 1.0 - p)).exp()
        })
        .collect()
}

// Hypergraph on at most 64 vertices as vertex bitmasks, for the oracles.
struct MaskGraph {
    v: u32,
    edges: Vec<u64>,
}

impl MaskGraph {
    fn new(v: u32, catalog: &[u64], mask: u64) -> Self {
        let edges = catalog.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Self { v, edges }
    }

    fn degree_ok(&self, set: u64, r: u32) -> bool {
        let mut deg = [0u32; 64];
        for &e in self.edges.iter().filter(|&&e| e & !set == 0) {
            let mut bits = e;
            while bits != 0 {
                deg[bits.trailing_zeros() as usize] += 1;
                bits &= bits - 1;
            }
        }
        let mut bits = set;
        while bits != 0 {
            if deg[bits.trailing_zeros() as usize] < r {
                return false;
            }
            bits &= bits - 1;
        }
        true
    }

    // batch peeling on masks
    fn peel(&self, r: u32) -> u64 {
        let mut alive = if self.v == 64 { u64::MAX } else { (1u64 << self.v) - 1 };
        loop {
            let mut deg = [0u32; 64];
            for &e in self.edges.iter().filter(|&&e| e & !alive == 0) {
                let mut bits = e;
                while bits != 0 {
                    deg[bits.trailing_zeros() as usize] += 1;
                    bits &= bits - 1;
                }
            }
            let mut drop = 0u64;
            let mut bits = alive;
            while bits != 0 {
                let x = bits.trailing_zeros();
                if deg[x as usize] < r {
                    drop |= 1 << x;
                }
                bits &= bits - 1;
            }
            if drop == 0 {
                return alive;
            }
            alive &= !drop;
        }
    }

    fn component_count(&self, set: u64) -> u32 {
        let inside: Vec<u64> = self.edges.iter().copied().filter(|&e| e & !set == 0).collect();
        let mut left = set;
        let mut count = 0;
        while left != 0 {
            let mut comp = 1u64 << left.trailing_zeros();
            loop {
                let grown = inside.iter().filter(|&&e| e & comp != 0).fold(comp, |a, &e| a | e);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            left &= !comp;
            count += 1;
        }
        count
    }

    fn minimal_core_count(&self, r: u32) -> u32 {
        let n = 1usize << self.v;
        let mut is_core = vec![false; n];
        let mut below = vec![false; n]; // some proper nonempty subset is a core
        let mut minimal = 0;
        for s in 1..n {
            let mut bits = s;
            while bits != 0 {
                let sub = s & !(1 << bits.trailing_zeros());
                if sub != 0 && (is_core[sub] || below[sub]) {
                    below[s] = true;
                    break;
                }
                bits &= bits - 1;
            }
            is_core[s] = self.degree_ok(s as u64, r);
            if is_core[s] && !below[s] {
                minimal += 1;
            }
        }
        minimal
    }
}
