//! Binomial coefficients and the central hypergeometric distribution.

use std::f64::consts::LN_2;

/// Running products are rescaled by 2^-512 once they pass 2^512.
const SCALE_BITS: i64 = 512;
const SCALE_UP: f64 = 1.340_780_792_994_259_7e154;
const SCALE_DOWN: f64 = 7.458_340_731_200_207e-155;

/// A double-double value `hi + lo` carried with an explicit power-of-two
/// exponent, so that products of thousands of integers neither overflow nor
/// accumulate rounding error.
#[derive(Clone, Copy)]
struct ScaledProduct {
    hi: f64,
    lo: f64,
    exp2: i64,
}

impl ScaledProduct {
    fn one() -> Self {
        Self { hi: 1.0, lo: 0.0, exp2: 0 }
    }

    fn mul(&mut self, factor: f64) {
        let p = self.hi * factor;
        let err = self.hi.mul_add(factor, -p) + self.lo * factor;
        let s = p + err;
        self.lo = err - (s - p);
        self.hi = s;
        if self.hi > SCALE_UP {
            self.hi *= SCALE_DOWN;
            self.lo *= SCALE_DOWN;
            self.exp2 += SCALE_BITS;
        }
    }

    /// `ln(self / other)`, dividing before taking the logarithm so the two
    /// large magnitudes never meet in a subtraction.
    fn ln_ratio(&self, other: &Self) -> f64 {
        let q = self.hi / other.hi;
        let rem = (-q).mul_add(other.hi, self.hi);
        let rel = rem / self.hi + self.lo / self.hi - other.lo / other.hi;
        q.ln() + rel.ln_1p() + (self.exp2 - other.exp2) as f64 * LN_2
    }
}

/// Natural logarithm of `C(n, r)`; `-inf` when `r > n`.
///
/// Evaluated as an extended-precision running product of the integer factors
/// so the only significant rounding is the final logarithm. Cost is
/// `O(min(r, n - r))`.
pub fn log_binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return f64::NEG_INFINITY;
    }
    let r = r.min(n - r);
    if r == 0 {
        return 0.0;
    }
    let mut num = ScaledProduct::one();
    let mut den = ScaledProduct::one();
    for j in 1..=r {
        num.mul((n - r + j) as f64);
        den.mul(j as f64);
    }
    num.ln_ratio(&den)
}

/// Probability of `x` marked items when drawing `draws` items without
/// replacement from `population` items of which `successes` are marked.
///
/// Returns zero outside the support.
///
/// # Panics
///
/// If `successes > population` or `draws > population`.
pub fn hypergeom_pmf(x: i64, population: u64, successes: u64, draws: u64) -> f64 {
    assert!(successes <= population, "successes exceed population");
    assert!(draws <= population, "draws exceed population");
    let (lo, hi) = hypergeom_support(population, successes, draws);
    if x < lo as i64 || x > hi as i64 {
        return 0.0;
    }
    let x = x as u64;
    (log_binomial(successes, x) + log_binomial(population - successes, draws - x)
        - log_binomial(population, draws))
    .exp()
}

/// Inclusive support `[lo, hi]` of the hypergeometric count.
pub fn hypergeom_support(population: u64, successes: u64, draws: u64) -> (u64, u64) {
    let failures = population - successes;
    (draws.saturating_sub(failures), draws.min(successes))
}

/// The whole hypergeometric pmf over its support, `pmf[t]` being the
/// probability of `lo + t` marked items.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomRow {
    pub lo: usize,
    pub pmf: Vec<f64>,
}

impl HypergeomRow {
    /// Probability of exactly `x` marked items.
    pub fn get(&self, x: usize) -> f64 {
        x.checked_sub(self.lo)
            .and_then(|t| self.pmf.get(t))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn hi(&self) -> usize {
        self.lo + self.pmf.len() - 1
    }
}

/// Evaluates the hypergeometric pmf for every count at once.
///
/// Starts from the mode and walks outwards with the term ratios, then
/// normalizes by the sum. Costs `O(support)` and never forms a binomial
/// coefficient, so it is the workhorse behind the reduced-distribution
/// formulas.
pub fn hypergeom_row(population: usize, successes: usize, draws: usize) -> HypergeomRow {
    assert!(successes <= population && draws <= population);
    let (lo, hi) = hypergeom_support(population as u64, successes as u64, draws as u64);
    let (lo, hi) = (lo as usize, hi as usize);
    let n = population as f64;
    let m = successes as f64;
    let d = draws as f64;
    let mode = (((d + 1.0) * (m + 1.0) / (n + 2.0)).floor() as usize).clamp(lo, hi);

    let mut pmf = vec![0.0; hi - lo + 1];
    pmf[mode - lo] = 1.0;
    // p(x+1)/p(x) = (m - x)(d - x) / ((x + 1)(n - m - d + x + 1))
    let mut cur = 1.0;
    for x in mode..hi {
        let xf = x as f64;
        cur *= (m - xf) * (d - xf) / ((xf + 1.0) * (n - m - d + xf + 1.0));
        if cur == 0.0 {
            break;
        }
        pmf[x + 1 - lo] = cur;
    }
    // p(x-1)/p(x) = x (n - m - d + x) / ((m - x + 1)(d - x + 1))
    cur = 1.0;
    for x in (lo + 1..=mode).rev() {
        let xf = x as f64;
        cur *= xf * (n - m - d + xf) / ((m - xf + 1.0) * (d - xf + 1.0));
        if cur == 0.0 {
            break;
        }
        pmf[x - 1 - lo] = cur;
    }
    let total: f64 = pmf.iter().sum();
    pmf.iter_mut().for_each(|p| *p /= total);
    HypergeomRow { lo, pmf }
}

/// `C(a - b, i) / C(a, i)`: the chance that `i` uniform draws out of `a`
/// items all avoid a fixed set of `b` items.
pub fn avoid_probability(a: usize, b: usize, i: usize) -> f64 {
    if i > a.saturating_sub(b) {
        return 0.0;
    }
    (0..i).fold(1.0, |acc, j| acc * (a - b - j) as f64 / (a - j) as f64)
}
