//! Parameter sweeps over expected edge count at fixed overhead, and
//! detection of the point where a formula stops being trustworthy.
//!
//! A sweep point is an expected edge count `e`. The vertex count is
//! `v = round(overhead * e)` and the edge probability `p = e / C(v, k)`, so
//! `e` edges are expected on the `v` vertices. In local scope `v` plays the
//! role of the subset size `u`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::global_prob::{GlobalSolver, LocalMethod, LocalProvider};
use crate::hypergraph::{HypergraphParams, Seed};
use crate::local_prob::{LocalContext, LocalQuery};
use crate::montecarlo::{mc_global, mc_local, LocalPredicate, McEstimate};
use crate::numerics::choose_f64;
use crate::par::{self, Execution};
use crate::prob::ProbValue;

/// Default upper end of a breakdown scan.
pub const DEFAULT_SCAN_CAP: u32 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Connectivity,
    Covering,
    InterleavedLower,
    InterleavedUpper,
    Mc,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Connectivity,
        Method::Covering,
        Method::InterleavedLower,
        Method::InterleavedUpper,
        Method::Mc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Connectivity => "connectivity",
            Method::Covering => "covering",
            Method::InterleavedLower => "interleaved-lower",
            Method::InterleavedUpper => "interleaved-upper",
            Method::Mc => "mc",
        }
    }

    pub fn is_formula(self) -> bool {
        self != Method::Mc
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown method `{s}`")))
    }
}

/// Whether probabilities refer to one fixed vertex subset or to the whole
/// hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Local,
    #[default]
    Global,
}

/// `(v, p)` for expected edge count `e` at the given overhead.
pub fn sweep_point(k: u32, overhead: f64, e: u32) -> Result<(u32, f64)> {
    if !(overhead > 0.0 && overhead.is_finite()) {
        return Err(Error::InvalidParams(format!("overhead {overhead} must be positive")));
    }
    let v = (overhead * f64::from(e)).round();
    if v < f64::from(k) || v > f64::from(u32::MAX) {
        return Err(Error::InvalidParams(format!("e = {e} at overhead {overhead} gives v = {v} < k = {k}")));
    }
    let v = v as u32;
    let p = f64::from(e) / choose_f64(u64::from(v), i64::from(k))?;
    if p > 1.0 {
        return Err(Error::InvalidParams(format!("e = {e} exceeds the C({v}, {k}) possible edges")));
    }
    Ok((v, p))
}

/// Evaluates a formula method at one point. `v` is the subset size in local
/// scope and the vertex count in global scope.
pub fn evaluate_formula(
    scope: Scope,
    method: Method,
    v: u32,
    k: u32,
    p: f64,
    r: u32,
    ctx: &mut LocalContext,
) -> ProbValue {
    let p_lower = p / f64::from(r);
    match scope {
        Scope::Local => match method {
            Method::Connectivity => ctx.connectivity(v, k, p),
            Method::Covering => ctx.covering(v, k, p, r),
            Method::InterleavedUpper => ctx.interleaved(v, k, p, r),
            Method::InterleavedLower => ctx.interleaved(v, k, p_lower, r),
            Method::Mc => panic!("mc is not a formula method"),
        },
        Scope::Global => {
            let (local, q) = match method {
                Method::Connectivity => (LocalMethod::Connectivity, p),
                Method::Covering => (LocalMethod::Covering, p),
                Method::InterleavedUpper => (LocalMethod::InterleavedConnectivity, p),
                Method::InterleavedLower => (LocalMethod::InterleavedConnectivity, p_lower),
                Method::Mc => panic!("mc is not a formula method"),
            };
            GlobalSolver::new(k, q, r, LocalProvider::new(local, ctx)).solve(v).at_least_one_bound
        }
    }
}

/// Monte Carlo estimate at one point (connectivity predicate locally when
/// `r = 1`, min-degree otherwise; peeling globally).
pub fn evaluate_mc(
    scope: Scope,
    v: u32,
    k: u32,
    p: f64,
    r: u32,
    trials: u64,
    seed: Seed,
) -> Result<McEstimate> {
    match scope {
        Scope::Local => {
            let predicate = if r == 1 { LocalPredicate::Connectivity } else { LocalPredicate::MinDegree };
            mc_local(&LocalQuery::new(v, k, p, r)?, predicate, trials, seed)
        }
        Scope::Global => mc_global(&HypergraphParams::new(v, k, p, r)?, trials, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub scope: Scope,
    pub k: u32,
    pub r: u32,
    pub overhead: f64,
    pub e_range: RangeInclusive<u32>,
    pub methods: Vec<Method>,
    pub trials: u64,
    pub seed: Seed,
}

impl SweepSpec {
    /// Checks every point and normalises the method list (sorted, unique).
    pub fn validate(mut self) -> Result<Self> {
        if self.e_range.is_empty() {
            return Err(Error::InvalidParams("empty e range".into()));
        }
        if self.k < 2 || self.r < 1 {
            return Err(Error::InvalidParams("need k >= 2 and r >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParams("no methods requested".into()));
        }
        self.methods.sort();
        self.methods.dedup();
        if self.methods.contains(&Method::Mc) && self.trials == 0 {
            return Err(Error::InvalidParams("mc needs at least one trial".into()));
        }
        for e in self.e_range.clone() {
            sweep_point(self.k, self.overhead, e)?;
        }
        Ok(self)
    }

    pub fn formula_methods(&self) -> impl Iterator<Item = Method> + '_ {
        self.methods.iter().copied().filter(|m| m.is_formula())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub e_v: u32,
    pub v: u32,
    pub p: f64,
    /// One entry per formula method, in spec order.
    pub values: Vec<(Method, ProbValue)>,
    pub mc: Option<McEstimate>,
    /// Whether this row is at or past the method's breakdown point.
    pub broken: Vec<(Method, bool)>,
}

impl SweepRow {
    pub fn value(&self, m: Method) -> Option<ProbValue> {
        self.values.iter().find(|(x, _)| *x == m).map(|(_, v)| *v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
    /// First `e_v` flagged for each formula method.
    pub breakdown_at: Vec<(Method, Option<u32>)>,
}

/// Runs a sweep. Rows are evaluated independently (in parallel when
/// enabled); the row for `e` draws its Monte Carlo trials from
/// `seed.derive(e)`, so output does not depend on the range or scheduling.
pub fn run_sweep(spec: SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, Execution::default())
}

pub fn run_sweep_with(spec: SweepSpec, exec: Execution) -> Result<SweepResult> {
    let spec = spec.validate()?;
    let points: Vec<u32> = spec.e_range.clone().collect();
    let rows = par::map_collect(points, exec, |e| -> Result<SweepRow> {
        let (v, p) = sweep_point(spec.k, spec.overhead, e)?;
        let mut ctx = LocalContext::new();
        let values = spec
            .formula_methods()
            .map(|m| (m, evaluate_formula(spec.scope, m, v, spec.k, p, spec.r, &mut ctx)))
            .collect();
        let mc = if spec.methods.contains(&Method::Mc) {
            Some(evaluate_mc(spec.scope, v, spec.k, p, spec.r, spec.trials, spec.seed.derive(u64::from(e)))?)
        } else {
            None
        };
        Ok(SweepRow { e_v: e, v, p, values, mc, broken: Vec::new() })
    });
    let mut rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let breakdown_at: Vec<(Method, Option<u32>)> = spec
        .formula_methods()
        .map(|m| {
            let mut det = BreakdownDetector::default();
            let at =
                rows.iter().find(|row| det.push(row.value(m).expect("method evaluated"))).map(|row| row.e_v);
            (m, at)
        })
        .collect();
    for row in &mut rows {
        row.broken = breakdown_at.iter().map(|&(m, at)| (m, at.is_some_and(|t| row.e_v >= t))).collect();
    }
    Ok(SweepResult { spec, rows, breakdown_at })
}

/// Flags the first point of a series that is invalid, or that rises again
/// after the series has started to fall.
#[derive(Debug, Clone, Default)]
pub struct BreakdownDetector {
    prev: Option<f64>,
    falling: bool,
}

impl BreakdownDetector {
    /// Feeds the next point; true if it marks breakdown.
    pub fn push(&mut self, value: ProbValue) -> bool {
        if !value.valid {
            return true;
        }
        let x = value.value;
        if let Some(prev) = self.prev {
            if self.falling && x > prev {
                return true;
            }
            if x < prev {
                self.falling = true;
            }
        }
        self.prev = Some(x);
        false
    }
}

/// Outcome of [`scan_breakdown`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakdownScan {
    /// First failing `e`, if any at or below the cap.
    pub breakdown_at: Option<u32>,
    /// Feasible points examined.
    pub points: u32,
    pub cap: u32,
}

/// Walks `e = 1..=cap` (skipping points with `v < k` or `p > 1`) until a
/// formula method breaks down.
pub fn scan_breakdown(
    scope: Scope,
    method: Method,
    k: u32,
    r: u32,
    overhead: f64,
    cap: u32,
) -> Result<BreakdownScan> {
    if !method.is_formula() {
        return Err(Error::InvalidParams("breakdown scans need a formula method".into()));
    }
    if k < 2 || r < 1 {
        return Err(Error::InvalidParams("need k >= 2 and r >= 1".into()));
    }
    if !(overhead > 0.0 && overhead.is_finite()) {
        return Err(Error::InvalidParams(format!("overhead {overhead} must be positive")));
    }
    let mut det = BreakdownDetector::default();
    let mut points = 0;
    for e in 1..=cap {
        let Ok((v, p)) = sweep_point(k, overhead, e) else {
            continue;
        };
        points += 1;
        let mut ctx = LocalContext::new();
        if det.push(evaluate_formula(scope, method, v, k, p, r, &mut ctx)) {
            return Ok(BreakdownScan { breakdown_at: Some(e), points, cap });
        }
    }
    Ok(BreakdownScan { breakdown_at: None, points, cap })
}
