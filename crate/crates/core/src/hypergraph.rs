//! Concrete k-uniform hypergraphs: sampling, peeling and induced-subgraph
//! predicates.
//!
//! Candidate edges are always enumerated in colexicographic order (sorted by
//! largest vertex, then next largest, ...). Sampling draws exactly one
//! uniform variate per candidate in that order, so a seed reproduces the same
//! hypergraph on every platform.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{choose, choose_u64};

/// Largest candidate-edge count [`generate`] will enumerate.
pub const GENERATE_MAX_CANDIDATES: u64 = 1 << 31;
/// Largest candidate-edge count [`enumerate_all`] accepts (2^20 hypergraphs).
pub const ENUMERATE_MAX_CANDIDATES: u64 = 20;

/// Parameters of the random model: `v` vertices, each of the `C(v, k)`
/// possible `k`-edges present independently with probability `p`, cores of
/// order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergraphParams {
    v: u32,
    k: u32,
    p: f64,
    r: u32,
}

impl HypergraphParams {
    pub fn new(v: u32, k: u32, p: f64, r: u32) -> Result<Self> {
        if v < 1 {
            return Err(Error::InvalidParams("v must be at least 1".into()));
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
        Ok(Self { v, k, p, r })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Expected edge count `p * C(v, k)`.
    pub fn expected_edges(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.p * choose(u64::from(self.v), i64::from(self.k)).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Seed for every random draw in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Seed for block `index` of a run started from `self`.
    ///
    /// `splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)`, i.e. the
    /// `index + 1`-th output of a SplitMix64 stream seeded with `master`.
    pub fn derive(self, index: u64) -> Seed {
        let z = self.0.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Seed(splitmix64_mix(z))
    }
}

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// All `k`-subsets of `[0, v)` in colexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCatalog {
    v: u32,
    k: u32,
    // flattened, stride k
    edges: Vec<u32>,
}

impl EdgeCatalog {
    pub fn new(v: u32, k: u32, max_candidates: u64) -> Result<Self> {
        let count = choose_u64(u64::from(v), i64::from(k)).ok().filter(|&c| c <= max_candidates).ok_or_else(
            || {
                Error::ScaleGuard(format!(
                    "C({v}, {k}) candidate edges exceeds the limit of {max_candidates}"
                ))
            },
        )?;
        let mut edges = Vec::with_capacity(count as usize * k as usize);
        if k <= v {
            let mut comb: Vec<u32> = (0..k).collect();
            loop {
                edges.extend_from_slice(&comb);
                if !next_colex(&mut comb, v) {
                    break;
                }
            }
        }
        debug_assert_eq!(edges.len() as u64, count * u64::from(k));
        Ok(Self { v, k, edges })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.edges.len() / self.k as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        let k = self.k as usize;
        &self.edges[i * k..(i + 1) * k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.edges.chunks_exact(self.k as usize)
    }

    /// Includes each candidate independently with probability `p`, one
    /// uniform draw per candidate.
    pub fn sample<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Hypergraph {
        let mut edges = Vec::new();
        for e in self.iter() {
            let x: f64 = rng.random();
            if x < p {
                edges.extend_from_slice(e);
            }
        }
        Hypergraph { v: self.v, k: self.k, edges }
    }

    /// The hypergraph whose edges are the candidates selected by `mask`
    /// (bit `i` selects candidate `i`).
    pub fn from_mask(&self, mask: u64) -> Hypergraph {
        let mut edges = Vec::new();
        for (i, e) in self.iter().enumerate() {
            if mask >> i & 1 == 1 {
                edges.extend_from_slice(e);
            }
        }
        Hypergraph { v: self.v, k: self.k, edges }
    }
}

// Advance a sorted combination to its colex successor; false after the last.
fn next_colex(comb: &mut [u32], v: u32) -> bool {
    let k = comb.len();
    for i in 0..k {
        let limit = if i + 1 < k { comb[i + 1] } else { v };
        if comb[i] + 1 < limit {
            comb[i] += 1;
            for (j, c) in comb.iter_mut().enumerate().take(i) {
                *c = j as u32;
            }
            return true;
        }
    }
    false
}

/// A `k`-uniform hypergraph on vertices `0..v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    v: u32,
    k: u32,
    // flattened, stride k; each edge sorted
    edges: Vec<u32>,
}

impl Hypergraph {
    /// Builds a hypergraph from explicit edges, checking uniformity, vertex
    /// range and duplicates. Edges are stored sorted.
    pub fn new<I, E>(v: u32, k: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if k < 2 {
            return Err(Error::InvalidParams(format!("k = {k}; edges need at least 2 vertices")));
        }
        let mut list: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            e.sort_unstable();
            if e.len() != k as usize {
                return Err(Error::InvalidParams(format!("edge {e:?} does not have {k} vertices")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParams(format!("edge {e:?} repeats a vertex")));
            }
            if e.iter().any(|&x| x >= v) {
                return Err(Error::InvalidParams(format!("edge {e:?} leaves [0, {v})")));
            }
            list.push(e);
        }
        let before = list.len();
        list.sort_unstable_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        list.dedup();
        if list.len() != before {
            return Err(Error::InvalidParams("duplicate edge".into()));
        }
        Ok(Self { v, k, edges: list.concat() })
    }

    pub fn empty(v: u32, k: u32) -> Self {
        Self { v, k, edges: Vec::new() }
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.k as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> {
        self.edges.chunks_exact(self.k as usize)
    }

    /// The maximal `r`-core, found by batch peeling.
    ///
    /// Each round removes every vertex of degree below `r` together with its
    /// incident edges; the process stops after a round that removes nothing.
    /// Returns the surviving vertices in increasing order.
    pub fn peel(&self, r: u32) -> Vec<u32> {
        self.peel_with_rounds(r).0
    }

    /// [`Hypergraph::peel`] plus the number of rounds that removed vertices.
    pub fn peel_with_rounds(&self, r: u32) -> (Vec<u32>, usize) {
        let v = self.v as usize;
        let mut alive = vec![true; v];
        let mut live_edges: Vec<&[u32]> = self.edges().collect();
        let mut degree = vec![0u32; v];
        let mut rounds = 0;
        loop {
            degree.iter_mut().for_each(|d| *d = 0);
            for e in &live_edges {
                for &x in *e {
                    degree[x as usize] += 1;
                }
            }
            let mut removed = false;
            for x in 0..v {
                if alive[x] && degree[x] < r {
                    alive[x] = false;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
            rounds += 1;
            live_edges.retain(|e| e.iter().all(|&x| alive[x as usize]));
        }
        let core = (0..self.v).filter(|&x| alive[x as usize]).collect();
        (core, rounds)
    }

    /// Whether the subgraph induced on `subset` connects all of `subset`.
    /// A single vertex is connected to itself.
    pub fn is_connected_on(&self, subset: &[u32]) -> Result<bool> {
        let member = self.membership(subset)?;
        let mut dsu = DisjointSet::new(self.v as usize);
        let mut components = member.iter().filter(|&&m| m).count();
        for e in self.induced(&member) {
            for w in e.windows(2) {
                if dsu.union(w[0] as usize, w[1] as usize) {
                    components -= 1;
                }
            }
        }
        Ok(components == 1)
    }

    /// Whether every vertex of `subset` has degree at least `r` in the
    /// subgraph induced on `subset`.
    pub fn has_rcore_on(&self, subset: &[u32], r: u32) -> Result<bool> {
        let member = self.membership(subset)?;
        let mut degree = vec![0u32; self.v as usize];
        for e in self.induced(&member) {
            for &x in e {
                degree[x as usize] += 1;
            }
        }
        Ok((0..self.v as usize).all(|x| !member[x] || degree[x] >= r))
    }

    /// Edges with every vertex inside the membership mask.
    pub fn induced<'a>(&'a self, member: &'a [bool]) -> impl Iterator<Item = &'a [u32]> + 'a {
        self.edges().filter(move |e| e.iter().all(|&x| member[x as usize]))
    }

    fn membership(&self, subset: &[u32]) -> Result<Vec<bool>> {
        if subset.is_empty() {
            return Err(Error::InvalidParams("vertex subset is empty".into()));
        }
        let mut member = vec![false; self.v as usize];
        for &x in subset {
            if x >= self.v {
                return Err(Error::InvalidParams(format!("vertex {x} outside [0, {})", self.v)));
            }
            member[x as usize] = true;
        }
        Ok(member)
    }

    /// Vertex set of every vertex as a list `0..v`.
    pub fn all_vertices(&self) -> Vec<u32> {
        (0..self.v).collect()
    }
}

/// Text dump: a `v k` header line, then one edge per line as
/// space-separated sorted vertex ids.
impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.v, self.k)?;
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_nums = |line: usize, l: &str| -> Result<Vec<u32>> {
            l.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| Error::Parse { line: line + 1, msg: e.to_string() }))
                .collect()
        };
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let header = parse_nums(hl, header)?;
        let [v, k] = header[..] else {
            return Err(Error::Parse { line: hl + 1, msg: "header must be `v k`".into() });
        };
        let edges = lines.map(|(i, l)| parse_nums(i, l)).collect::<Result<Vec<_>>>()?;
        Hypergraph::new(v, k, edges)
    }
}

/// Draws one hypergraph from `params` (the `r` field is not used).
pub fn generate(params: &HypergraphParams, seed: Seed) -> Result<Hypergraph> {
    let catalog = EdgeCatalog::new(params.v(), params.k(), GENERATE_MAX_CANDIDATES)?;
    Ok(catalog.sample(params.p(), &mut seed.rng()))
}

/// Every hypergraph on `v` vertices with edges of size `k`, in bitmask order
/// over the colex candidate enumeration.
pub fn enumerate_all(v: u32, k: u32) -> Result<impl Iterator<Item = Hypergraph>> {
    let catalog = EdgeCatalog::new(v, k, ENUMERATE_MAX_CANDIDATES)?;
    let total = 1u64 << catalog.len();
    Ok((0..total).map(move |mask| catalog.from_mask(mask)))
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
