//! Probability that an r-core (or a connected component) forms on one
//! specific set of `u` vertices.
//!
//! Three routes are provided:
//!
//! * the connectivity recursion for k-uniform hypergraphs,
//!   `f(u) = 1 - sum_{i<u} f(i) C(u-1, i-1) (1-p)^eps(u,i)`, where
//!   `eps(u, i)` counts the possible edges straddling a split of `u` vertices
//!   into `i` and `u - i`;
//! * Gilbert's graph recursion (`k = 2`, exponent `i (u - i)`), kept as a
//!   separate implementation for cross-checking;
//! * the covering heuristic, which marginalises the number of edges inside
//!   the subset and asks that every vertex sit in at least `r` edge slots.
//!
//! The connectivity recursion loses all precision once `u` reaches a few
//! dozen vertices: its terms nearly cancel. Values are never clamped;
//! instead each [`ProbValue`] records whether the table it came from stayed
//! inside `[-1e-9, 1 + 1e-9]`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{choose, choose_f64, BinomialDist, StableSum};
use crate::prob::{in_range, Diagnostic, ProbValue};

/// Support sizes above this are summed over `mean ± 12 sd` only.
pub const COVERING_EXACT_SUPPORT: u64 = 1_000_000;
/// Width of the truncated covering window, in standard deviations.
pub const COVERING_WINDOW_SDS: f64 = 12.0;
/// Outer covering terms stop once the binomial weight drops below this.
pub const COVERING_PMF_CUTOFF: f64 = 1e-18;

/// A local query: an `r`-core on a fixed set of `u` vertices, edges of size
/// `k` present with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalQuery {
    pub u: u32,
    pub k: u32,
    pub p: f64,
    pub r: u32,
}

impl LocalQuery {
    pub fn new(u: u32, k: u32, p: f64, r: u32) -> Result<Self> {
        if u < 1 {
            return Err(Error::InvalidParams("u must be at least 1".into()));
        }
        if k < 2 {
            return Err(Error::InvalidParams(format!("k = {k}; edges need at least 2 vertices")));
        }
        if r < 1 {
            return Err(Error::InvalidParams("r must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("p = {p} outside [0, 1]")));
        }
        Ok(Self { u, k, p, r })
    }
}

/// Number of possible `k`-edges with vertices on both sides of a split of
/// `u` vertices into parts of size `i` and `u - i`.
pub fn cross_edge_count(u: u64, i: u64, k: u64) -> Result<BigUint> {
    if i < 1 || i >= u {
        return Err(Error::InvalidParams(format!("part size {i} outside [1, {u})")));
    }
    let k = k as i64;
    Ok((1..=(i as i64).min(k - 1)).map(|j| choose(i, j) * choose(u - i, k - j)).sum())
}

/// `(1 - p)^e` for a possibly huge exponent.
fn pow_complement(p: f64, e: f64) -> f64 {
    if p < 0.5 {
        (e * (-p).ln_1p()).exp()
    } else {
        (1.0 - p).powf(e)
    }
}

/// Memoised values of the connectivity recursion at fixed `(k, p)`.
#[derive(Debug, Clone)]
pub struct ConnectivityTable {
    k: u32,
    p: f64,
    // values[u] = f(u); index 0 unused
    values: Vec<f64>,
    first_invalid: Option<u32>,
}

impl ConnectivityTable {
    pub fn new(k: u32, p: f64) -> Self {
        Self { k, p, values: vec![f64::NAN, 1.0], first_invalid: None }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Largest `u` computed so far.
    pub fn len(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest `u` whose value left the valid range, if any.
    pub fn first_invalid(&self) -> Option<u32> {
        self.first_invalid
    }

    /// Extends the table through `u_max`.
    pub fn extend_to(&mut self, u_max: u32) {
        let k = u64::from(self.k);
        for u in self.len() + 1..=u_max {
            let value = if u < self.k {
                0.0
            } else if u == self.k {
                // one candidate edge; the recursion gives 1 - (1 - p)
                self.p
            } else {
                let u64_ = u64::from(u);
                let mut sum = StableSum::new();
                for i in 1..u {
                    let fi = self.values[i as usize];
                    if fi == 0.0 {
                        continue;
                    }
                    let ways = choose_f64(u64_ - 1, i64::from(i) - 1).unwrap_or(f64::INFINITY);
                    let eps = cross_edge_count(u64_, u64::from(i), k)
                        .expect("1 <= i < u")
                        .to_f64()
                        .unwrap_or(f64::INFINITY);
                    sum.add(fi * ways * pow_complement(self.p, eps));
                }
                1.0 - sum.value()
            };
            if self.first_invalid.is_none() && !(value.is_finite() && in_range(value)) {
                self.first_invalid = Some(u);
            }
            self.values.push(value);
        }
    }

    /// `f(u)`; the table must already cover `u`.
    pub fn raw(&self, u: u32) -> f64 {
        self.values[u as usize]
    }

    /// `f(u)` with its validity flag, extending the table as needed.
    pub fn get(&mut self, u: u32) -> ProbValue {
        assert!(u >= 1, "connectivity is defined for u >= 1");
        self.extend_to(u);
        let value = self.values[u as usize];
        match self.first_invalid {
            Some(bad) if bad <= u => {
                let v = ProbValue::checked(value);
                if v.valid {
                    ProbValue::flagged(value, Diagnostic::Inherited)
                } else {
                    v
                }
            }
            _ => ProbValue::exact(value),
        }
    }
}

/// Caller-owned memo for local probabilities.
///
/// Not synchronised: give each thread its own context.
#[derive(Debug, Default, Clone)]
pub struct LocalContext {
    tables: HashMap<(u32, u64), ConnectivityTable>,
    covering: HashMap<(u32, u32, u64, u32), ProbValue>,
}

impl LocalContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&mut self, k: u32, p: f64) -> &mut ConnectivityTable {
        self.tables.entry((k, p.to_bits())).or_insert_with(|| ConnectivityTable::new(k, p))
    }

    /// Probability that `u` given vertices are connected.
    pub fn connectivity(&mut self, u: u32, k: u32, p: f64) -> ProbValue {
        self.table(k, p).get(u)
    }

    /// Local r-core probability on the interleaved construction: the
    /// connectivity probability raised to the `r`-th power.
    pub fn interleaved(&mut self, u: u32, k: u32, p: f64, r: u32) -> ProbValue {
        let base = self.connectivity(u, k, p);
        let value = base.value.powi(r as i32);
        if base.valid {
            ProbValue::checked(value)
        } else {
            ProbValue { value, ..base }
        }
    }

    pub fn covering(&mut self, u: u32, k: u32, p: f64, r: u32) -> ProbValue {
        *self.covering.entry((u, k, p.to_bits(), r)).or_insert_with(|| covering_prob(u, k, p, r))
    }
}

/// See [`LocalContext::connectivity`]; uses a throwaway memo.
pub fn connectivity_prob(u: u32, k: u32, p: f64) -> ProbValue {
    ConnectivityTable::new(k, p).get(u)
}

/// See [`LocalContext::interleaved`]; uses a throwaway memo.
pub fn interleaved_local_prob(u: u32, k: u32, p: f64, r: u32) -> ProbValue {
    LocalContext::new().interleaved(u, k, p, r)
}

/// Gilbert's recursion for the probability that `u` given vertices of an
/// Erdős–Rényi graph are connected.
pub fn gilbert_prob(u: u32, p: f64) -> ProbValue {
    assert!(u >= 1, "connectivity is defined for u >= 1");
    let q = 1.0 - p;
    let mut f = vec![0.0, 1.0];
    for n in 2..=u {
        let mut sum = StableSum::new();
        for i in 1..n {
            let ways = choose_f64(u64::from(n) - 1, i64::from(i) - 1).unwrap_or(f64::INFINITY);
            sum.add(f[i as usize] * ways * q.powf(f64::from(i) * f64::from(n - i)));
        }
        f.push(1.0 - sum.value());
    }
    let bad = f[1..].iter().any(|x| !(x.is_finite() && in_range(*x)));
    let value = f[u as usize];
    if bad {
        ProbValue::derived(value, false)
    } else {
        ProbValue::exact(value)
    }
}

/// Covering heuristic: the number of edges inside the subset is
/// `Binomial(C(u, k), p)`; given `e` edges, each vertex independently fills
/// at least `r` of the `k e` slots with probability `1 - B(r - 1; e, k/u)`,
/// and all `u` vertices must be covered.
pub fn covering_prob(u: u32, k: u32, p: f64, r: u32) -> ProbValue {
    assert!(r >= 1, "core order must be at least 1");
    if u < k {
        return ProbValue::zero();
    }
    let Ok(m) = choose_f64(u64::from(u), i64::from(k)) else {
        return ProbValue::flagged(f64::NAN, Diagnostic::NotFinite);
    };
    let m = m as u64;
    let edges = BinomialDist::new(m, p).expect("p checked by caller");
    let slot = f64::from(k) / f64::from(u);
    let (lo, hi) = if m <= COVERING_EXACT_SUPPORT {
        (0, m)
    } else {
        let half = COVERING_WINDOW_SDS * edges.std_dev();
        let lo = (edges.mean() - half).floor().max(0.0) as u64;
        let hi = ((edges.mean() + half).ceil() as u64).min(m);
        (lo, hi)
    };
    let covered = |e: u64| -> f64 {
        let per_vertex = BinomialDist::new(e, slot).expect("k <= u").sf(i64::from(r) - 1);
        per_vertex.powi(u as i32)
    };
    let mode = edges.mode().clamp(lo, hi);
    let mut sum = StableSum::new();
    // walk outward from the mode; both tails are monotone in the pmf
    let mut e = mode;
    loop {
        let w = edges.pmf(e as i64);
        if w < COVERING_PMF_CUTOFF && e != mode {
            break;
        }
        sum.add(w * covered(e));
        if e == hi {
            break;
        }
        e += 1;
    }
    let mut e = mode;
    while e > lo {
        e -= 1;
        let w = edges.pmf(e as i64);
        if w < COVERING_PMF_CUTOFF {
            break;
        }
        sum.add(w * covered(e));
    }
    ProbValue::checked(sum.value())
}
