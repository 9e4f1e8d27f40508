//! Ideal and Robust Soliton distributions.

use serde::{Deserialize, Serialize};

use super::DegreeDistribution;
use crate::error::{domain, Result};

/// Robust Soliton parameters: block length `k`, constant `c` and failure
/// bound `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsdParams {
    pub k: usize,
    pub c: f64,
    pub delta: f64,
}

impl RsdParams {
    pub fn new(k: usize, c: f64, delta: f64) -> Result<Self> {
        let params = Self { k, c, delta };
        params.validate()?;
        Ok(params)
    }

    /// The same `c` and `delta` over a different block length.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(k, self.c, self.delta)
    }

    /// Expected ripple size `S = c ln(k/δ) √k`.
    pub fn ripple(&self) -> f64 {
        self.c * (self.k as f64 / self.delta).ln() * (self.k as f64).sqrt()
    }

    /// Degree carrying the extra spike, `⌈k/S⌉`.
    pub fn spike(&self) -> usize {
        (self.k as f64 / self.ripple()).ceil() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return domain("RSD needs k >= 1");
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return domain(format!("RSD constant c = {} must be positive", self.c));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return domain(format!("RSD delta = {} must lie in (0, 1]", self.delta));
        }
        // A single input symbol admits only degree one; S is irrelevant.
        if self.k == 1 {
            return Ok(());
        }
        let s = self.ripple();
        if !(s > 0.0 && s <= self.k as f64) {
            return domain(format!("RSD ripple S = {s} outside (0, k = {}]", self.k));
        }
        Ok(())
    }
}

/// Ideal Soliton: `1/k` at degree one, `1/(i(i-1))` above.
pub fn ideal_soliton(k: usize) -> Result<DegreeDistribution> {
    if k == 0 {
        return domain("ideal soliton needs k >= 1");
    }
    let mut pmf = vec![0.0; k + 1];
    pmf[1] = 1.0 / k as f64;
    for (i, p) in pmf.iter_mut().enumerate().skip(2) {
        *p = 1.0 / (i * (i - 1)) as f64;
    }
    DegreeDistribution::from_weights(k, pmf)
}

/// Robust Soliton: Ideal Soliton plus `τ(i) = S/(ik)` below `k/S` and a
/// spike `S ln(S/δ)/k` at `⌈k/S⌉`, normalized. A spike beyond `k` is dropped.
pub fn robust_soliton(params: RsdParams) -> Result<DegreeDistribution> {
    params.validate()?;
    let k = params.k;
    if k == 1 {
        return DegreeDistribution::point_mass(1, 1);
    }
    let s = params.ripple();
    let kf = k as f64;
    let threshold = kf / s;
    let spike = params.spike();

    let mut weights = vec![0.0; k + 1];
    weights[1] = 1.0 / kf;
    for (i, w) in weights.iter_mut().enumerate().skip(2) {
        *w = 1.0 / (i * (i - 1)) as f64;
    }
    for (i, w) in weights.iter_mut().enumerate().skip(1) {
        if (i as f64) < threshold {
            *w += s / (i as f64 * kf);
        } else if i == spike {
            *w += s * (s / params.delta).ln() / kf;
        }
    }
    DegreeDistribution::from_weights(k, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_symbol_block() {
        for (c, delta) in [(0.1, 1.0), (0.5, 0.05), (3.0, 0.5)] {
            let d = robust_soliton(RsdParams { k: 1, c, delta }).unwrap();
            assert_eq!(d.pmf(), &[0.0, 1.0]);
        }
    }

    #[test]
    fn normalized_without_degree_zero() {
        for k in [2, 10, 100, 1000, 4000] {
            let d = robust_soliton(RsdParams::new(k, 0.1, 1.0).unwrap()).unwrap();
            assert_eq!(d.prob(0), 0.0);
            assert!((d.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    /// Values frozen from an independent scripted evaluation of the formula.
    #[test]
    fn k100_matches_scripted_values() {
        let params = RsdParams::new(100, 0.1, 1.0).unwrap();
        assert!((params.ripple() - 4.605170185988092).abs() < 1e-12);
        assert_eq!(params.spike(), 22);
        let d = robust_soliton(params).unwrap();
        let frozen = [
            (1, 0.04526854469894714),
            (2, 0.42240678384242686),
            (21, 0.0036939711482151965),
            (22, 0.0585474701063963),
            (100, 8.15779025595252e-05),
        ];
        for (i, p) in frozen {
            assert!((d.prob(i) - p).abs() < 1e-15, "pmf[{i}] = {}", d.prob(i));
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(RsdParams::new(0, 0.1, 1.0).is_err());
        assert!(RsdParams::new(100, 0.0, 1.0).is_err());
        assert!(RsdParams::new(100, 0.1, 0.0).is_err());
        assert!(RsdParams::new(100, 0.1, 1.5).is_err());
        // S = 3 ln(100) 10 > 100
        assert!(RsdParams::new(100, 3.0, 1.0).is_err());
    }

    #[test]
    fn ideal_soliton_sums_to_one() {
        let d = ideal_soliton(50).unwrap();
        assert!((d.prob(1) - 1.0 / 50.0).abs() < 1e-15);
        assert!((d.prob(2) - 0.5).abs() < 1e-15);
    }
}
