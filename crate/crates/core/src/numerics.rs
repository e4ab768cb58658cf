//! Combinatorial and binomial-distribution primitives.
//!
//! Binomial coefficients are exact ([`BigUint`]); conversions to `f64` are
//! explicit and report overflow. The binomial pmf uses the saddle-point
//! formulation (Loader, 2000) so that it stays accurate deep in the tails and
//! for trial counts in the millions.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn choose(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` as a `u64`, or an error if it does not fit.
pub fn choose_u64(n: u64, k: i64) -> Result<u64> {
    choose(n, k).to_u64().ok_or(Error::Overflow { what: "binomial coefficient", n, k })
}

/// Lossy conversion of `C(n, k)` to `f64`. Errors instead of returning infinity.
pub fn choose_f64(n: u64, k: i64) -> Result<f64> {
    let c = choose(n, k);
    match c.to_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(Error::Overflow { what: "binomial coefficient as f64", n, k }),
    }
}

/// Sum of `terms` with error-free transformations (Shewchuk's partials).
///
/// The result is the correctly rounded sum of the inputs in all but
/// pathological half-way cases, which is well inside 2 ulp.
pub fn stable_sum<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    let mut acc = StableSum::default();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

/// Running compensated sum; see [`stable_sum`].
#[derive(Debug, Clone, Default)]
pub struct StableSum {
    partials: Vec<f64>,
    special: f64,
}

impl StableSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        if !x.is_finite() {
            // inf/nan poison the sum the same way naive addition would
            self.special += x;
            return;
        }
        let mut x = x;
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn value(&self) -> f64 {
        if self.special != 0.0 || self.special.is_nan() {
            return self.special;
        }
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            n -= 1;
            let x = hi;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // round-half-even correction, as in CPython's math.fsum
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl Extend<f64> for StableSum {
    fn extend<T: IntoIterator<Item = f64>>(&mut self, iter: T) {
        for x in iter {
            self.add(x);
        }
    }
}

/// The distribution `Binomial[n, p]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialDist {
    n: u64,
    p: f64,
}

impl BinomialDist {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("binomial p = {p} outside [0, 1]")));
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn mean(&self) -> f64 {
        self.n as f64 * self.p
    }

    pub fn std_dev(&self) -> f64 {
        (self.n as f64 * self.p * (1.0 - self.p)).sqrt()
    }

    /// Most likely outcome, `floor((n + 1) p)` clamped to the support.
    pub fn mode(&self) -> u64 {
        (((self.n as f64 + 1.0) * self.p).floor() as u64).min(self.n)
    }

    /// `b(x; n, p)`.
    pub fn pmf(&self, x: i64) -> f64 {
        if x < 0 || x as u64 > self.n {
            return 0.0;
        }
        let x = x as u64;
        let n = self.n;
        let p = self.p;
        let q = 1.0 - p;
        if p == 0.0 {
            return if x == 0 { 1.0 } else { 0.0 };
        }
        if q == 0.0 {
            return if x == n { 1.0 } else { 0.0 };
        }
        if x == 0 {
            return (n as f64 * (-p).ln_1p()).exp();
        }
        if x == n {
            return (n as f64 * p.ln()).exp();
        }
        let (nf, xf) = (n as f64, x as f64);
        let yf = nf - xf;
        let lc = stirlerr(nf) - stirlerr(xf) - stirlerr(yf) - bd0(xf, nf * p) - bd0(yf, nf * q);
        let lf = std::f64::consts::TAU.ln() + xf.ln() + (-xf / nf).ln_1p();
        (lc - 0.5 * lf).exp()
    }

    /// `B(x; n, p)`, summed with compensation.
    pub fn cdf(&self, x: i64) -> f64 {
        if x < 0 {
            return 0.0;
        }
        if x as u64 >= self.n {
            return 1.0;
        }
        stable_sum((0..=x).map(|j| self.pmf(j))).min(1.0)
    }

    /// `1 - B(x; n, p)`, summing whichever tail is shorter.
    pub fn sf(&self, x: i64) -> f64 {
        if x < 0 {
            return 1.0;
        }
        if x as u64 >= self.n {
            return 0.0;
        }
        if (x as f64) < self.mean() {
            (1.0 - self.cdf(x)).max(0.0)
        } else {
            stable_sum((x + 1..=self.n as i64).map(|j| self.pmf(j))).min(1.0)
        }
    }
}

/// `b(x; n, p)` with argument checking.
pub fn binom_pmf(x: i64, n: i64, p: f64) -> Result<f64> {
    Ok(dist(n, p)?.pmf(x))
}

/// `B(x; n, p)` with argument checking.
pub fn binom_cdf(x: i64, n: i64, p: f64) -> Result<f64> {
    Ok(dist(n, p)?.cdf(x))
}

fn dist(n: i64, p: f64) -> Result<BinomialDist> {
    if n < 0 {
        return Err(Error::Domain(format!("binomial n = {n} is negative")));
    }
    BinomialDist::new(n as u64, p)
}

// ln(n!) - ln(sqrt(2 pi n) (n/e)^n)
fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        let lnfact: f64 = stable_sum((2..=n as u64).map(|i| (i as f64).ln()));
        return lnfact - (n + 0.5) * n.ln() + n - 0.5 * std::f64::consts::TAU.ln();
    }
    let nn = n * n;
    if n > 500.0 {
        return (S0 - S1 / nn) / n;
    }
    if n > 80.0 {
        return (S0 - (S1 - S2 / nn) / nn) / n;
    }
    if n > 35.0 {
        return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
    }
    (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
}

// x ln(x / np) + np - x, without cancellation when x ~ np
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
    }
    x * (x / np).ln() + np - x
}
