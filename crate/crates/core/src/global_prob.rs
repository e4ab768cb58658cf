//! Composition of local probabilities into the probability that exactly one
//! r-core forms anywhere, the geometric-series bound on forming at least
//! one, and the interleaving sandwich bounds.
//!
//! For a hypergraph on `n` vertices the size-`u` term is
//!
//! ```text
//! C_u(n)  = C'_u(n) * C''_u(n)
//! C'_u(n) = C(n, u) * L(u) * prod_{x = u+1}^{n} (1 - C_x(n))^C(n - u, x - u)
//! C''_u(n) = 1 - sum_{x = k}^{n - u} C_x(n - u)
//! ```
//!
//! where `L(u)` is the local probability from a [`LocalProvider`]. `C'`
//! needs every larger size first, so sizes are filled in descending order.
//! `C''` recurses into the instance on the `n - u` vertices left over; those
//! instances are memoised by vertex count.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::hypergraph::HypergraphParams;
use crate::local_prob::LocalContext;
use crate::numerics::{choose_f64, stable_sum};
use crate::prob::{Diagnostic, ProbValue};

/// Which local probability feeds the composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalMethod {
    /// Connectivity recursion `f(u)` (ignores `r`).
    Connectivity,
    /// Covering heuristic.
    Covering,
    /// `f(u)^r`, the interleaved construction.
    InterleavedConnectivity,
}

/// A local-probability method bound to a memo context.
#[derive(Debug)]
pub struct LocalProvider<'a> {
    method: LocalMethod,
    ctx: &'a mut LocalContext,
}

impl<'a> LocalProvider<'a> {
    pub fn new(method: LocalMethod, ctx: &'a mut LocalContext) -> Self {
        Self { method, ctx }
    }

    pub fn method(&self) -> LocalMethod {
        self.method
    }

    pub fn local(&mut self, u: u32, k: u32, p: f64, r: u32) -> ProbValue {
        match self.method {
            LocalMethod::Connectivity => self.ctx.connectivity(u, k, p),
            LocalMethod::Covering => self.ctx.covering(u, k, p, r),
            LocalMethod::InterleavedConnectivity => self.ctx.interleaved(u, k, p, r),
        }
    }
}

/// The three factors behind one size term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeTerm {
    pub u: u32,
    pub c_prime: ProbValue,
    pub c_double_prime: ProbValue,
    /// `C_u = C'_u * C''_u`.
    pub value: ProbValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalResult {
    pub v: u32,
    pub k: u32,
    pub p: f64,
    pub r: u32,
    /// Terms for `u = k..=v`, ascending.
    pub per_size: Vec<SizeTerm>,
    /// `C_*`, the probability that exactly one r-core forms.
    pub exactly_one: ProbValue,
    /// `C_* / (1 - C_*)`, bounding the probability that any r-core forms.
    pub at_least_one_bound: ProbValue,
    /// Largest `u` whose term is flagged.
    pub breakdown_at: Option<u32>,
}

impl GlobalResult {
    pub fn term(&self, u: u32) -> Option<&SizeTerm> {
        self.per_size.iter().find(|t| t.u == u)
    }

    /// `C_u`, zero below `k`.
    pub fn size_value(&self, u: u32) -> ProbValue {
        self.term(u).map_or(ProbValue::zero(), |t| t.value)
    }
}

/// Memoised composition at fixed `(k, p, r)` and provider.
#[derive(Debug)]
pub struct GlobalSolver<'a> {
    k: u32,
    p: f64,
    r: u32,
    provider: LocalProvider<'a>,
    solved: HashMap<u32, GlobalResult>,
}

impl<'a> GlobalSolver<'a> {
    pub fn new(k: u32, p: f64, r: u32, provider: LocalProvider<'a>) -> Self {
        Self { k, p, r, provider, solved: HashMap::new() }
    }

    /// Result for a hypergraph on `v` vertices.
    pub fn solve(&mut self, v: u32) -> &GlobalResult {
        // sub-instances are strictly smaller, so ascending order satisfies
        // every C'' lookup
        for n in 0..=v {
            if !self.solved.contains_key(&n) {
                let res = self.compute(n);
                self.solved.insert(n, res);
            }
        }
        &self.solved[&v]
    }

    /// `C'_u` on `v` vertices.
    pub fn c_prime(&mut self, v: u32, u: u32) -> ProbValue {
        self.solve(v).term(u).map_or(ProbValue::zero(), |t| t.c_prime)
    }

    /// `C''_u` on `v` vertices.
    pub fn c_double_prime(&mut self, v: u32, u: u32) -> ProbValue {
        let k = self.k;
        if u < k || u > v {
            return ProbValue::one();
        }
        self.solve(v).term(u).map_or(ProbValue::one(), |t| t.c_double_prime)
    }

    fn compute(&mut self, n: u32) -> GlobalResult {
        let (k, p, r) = (self.k, self.p, self.r);
        let mut terms: Vec<SizeTerm> = Vec::new();
        if n >= k {
            // descending: terms[j] holds size n - j
            for u in (k..=n).rev() {
                let c_prime = self.c_prime_term(n, u, &terms);
                let c_double_prime = self.c_double_prime_term(n, u);
                let value = ProbValue::derived(
                    c_prime.value * c_double_prime.value,
                    c_prime.valid && c_double_prime.valid,
                );
                terms.push(SizeTerm { u, c_prime, c_double_prime, value });
            }
            terms.reverse();
        }
        let all_valid = terms.iter().all(|t| t.value.valid);
        let exactly_one = ProbValue::derived(stable_sum(terms.iter().map(|t| t.value.value)), all_valid);
        let breakdown_at = terms.iter().rev().find(|t| !t.value.valid).map(|t| t.u);
        GlobalResult {
            v: n,
            k,
            p,
            r,
            at_least_one_bound: at_least_one_bound(exactly_one),
            per_size: terms,
            exactly_one,
            breakdown_at,
        }
    }

    // `larger` holds the already computed terms for sizes n, n-1, ..., u+1.
    fn c_prime_term(&mut self, n: u32, u: u32, larger: &[SizeTerm]) -> ProbValue {
        let (k, p, r) = (self.k, self.p, self.r);
        let local = self.provider.local(u, k, p, r);
        // one factor C(n, u) * L(u) rather than a sum over subsets times
        // C(n, u): L depends on |U| only
        let Ok(subsets) = choose_f64(u64::from(n), i64::from(u)) else {
            return ProbValue::flagged(f64::INFINITY, Diagnostic::NotFinite);
        };
        let mut value = subsets * local.value;
        let mut valid = local.valid;
        for t in larger {
            let x = t.u;
            debug_assert!(x > u);
            // supersets of a fixed u-set with x vertices: C(n - u, x - u)
            let supersets = choose_f64(u64::from(n - u), i64::from(x - u)).unwrap_or(f64::INFINITY);
            value *= (1.0 - t.value.value).powf(supersets);
            valid &= t.value.valid;
        }
        ProbValue::derived(value, valid)
    }

    fn c_double_prime_term(&mut self, n: u32, u: u32) -> ProbValue {
        // a second, disjoint core must live on the n - u remaining vertices;
        // sum_x C_x(n - u) is the exactly-one probability of that instance
        let rest = n - u;
        if rest < self.k {
            return ProbValue::one();
        }
        let sub = self.solved.get(&rest).expect("smaller instances are solved first").exactly_one;
        ProbValue::derived(1.0 - sub.value, sub.valid)
    }
}

/// Probability that exactly one r-core forms, with per-size terms.
pub fn exactly_one_core(params: &HypergraphParams, provider: LocalProvider<'_>) -> GlobalResult {
    GlobalSolver::new(params.k(), params.p(), params.r(), provider).solve(params.v()).clone()
}

/// Geometric-series bound `C <= C_* / (1 - C_*)`.
///
/// Saturates at 1 (flagged) when `C_* >= 1`. A bound above 1 is returned
/// as-is and marked [`Diagnostic::Vacuous`] but stays valid.
pub fn at_least_one_bound(exactly_one: ProbValue) -> ProbValue {
    let c = exactly_one.value;
    if !exactly_one.valid {
        let value = if c < 1.0 { c / (1.0 - c) } else { 1.0 };
        return ProbValue::flagged(value, Diagnostic::Inherited);
    }
    if c >= 1.0 {
        return ProbValue::flagged(1.0, Diagnostic::Saturated);
    }
    let bound = c / (1.0 - c);
    if bound > 1.0 {
        ProbValue { value: bound, valid: true, diagnostic: Some(Diagnostic::Vacuous) }
    } else {
        ProbValue::checked(bound)
    }
}

/// Lower and upper bounds on the probability that any r-core forms, from
/// the interleaved construction at edge probability `p / r` and `p`.
pub fn interleaving_bounds(params: &HypergraphParams, ctx: &mut LocalContext) -> (ProbValue, ProbValue) {
    let (v, k, p, r) = (params.v(), params.k(), params.p(), params.r());
    let bound_at = |q: f64, ctx: &mut LocalContext| {
        let provider = LocalProvider::new(LocalMethod::InterleavedConnectivity, ctx);
        GlobalSolver::new(k, q, r, provider).solve(v).at_least_one_bound
    };
    let lower = bound_at(p / f64::from(r), ctx);
    let upper = bound_at(p, ctx);
    (lower, upper)
}
