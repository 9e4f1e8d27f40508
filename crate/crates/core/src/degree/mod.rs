//! Degree distributions and their transformations under partial decoding.
//!
//! A degree distribution is a dense pmf over `0..=k`. Encoder-side
//! distributions never put mass on degree zero; the reduced forms seen by
//! the decoder usually do, and that mass is the probability of receiving a
//! redundant symbol.

mod layered;
mod reduced;
mod soliton;

use rand::Rng;

use crate::error::{domain, Result};

pub use layered::{
    n_layer_reduced_dist, two_layer_reduced_dist, LayerConfig, LayeredReducedDist,
    TwoLayerAnalyzer, TwoLayerReducedDist,
};
pub use reduced::{
    adaptive_degree_dist, reduced_degree_dist, reduced_degree_dist_acked, redundancy_prob,
    redundancy_prob_acked,
};
pub use soliton::{ideal_soliton, robust_soliton, RsdParams};

/// Tolerance on the total mass of a pmf handed to [`DegreeDistribution::new`].
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Probability mass over the degrees `0..=k`, with a cumulative table for
/// inverse-CDF sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    k: usize,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl DegreeDistribution {
    /// Validates `pmf` (length `k + 1`, nonnegative, summing to one).
    pub fn new(k: usize, pmf: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return domain("degree distribution needs k >= 1");
        }
        if pmf.len() != k + 1 {
            return domain(format!("pmf has {} entries, expected k + 1 = {}", pmf.len(), k + 1));
        }
        if let Some((i, p)) = pmf.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
            return domain(format!("pmf[{i}] = {p} is not a probability"));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return domain(format!("pmf sums to {total}"));
        }
        Ok(Self::from_parts(k, pmf))
    }

    pub(crate) fn from_parts(k: usize, pmf: Vec<f64>) -> Self {
        let cdf = pmf
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Self { k, pmf, cdf }
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(k: usize, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return domain(format!("weights sum to {total}"));
        }
        Self::new(k, weights.into_iter().map(|w| w / total).collect())
    }

    /// All mass on a single degree.
    pub fn point_mass(k: usize, degree: usize) -> Result<Self> {
        if degree > k {
            return domain(format!("degree {degree} exceeds k = {k}"));
        }
        let mut pmf = vec![0.0; k + 1];
        pmf[degree] = 1.0;
        Self::new(k, pmf)
    }

    /// Block length the distribution is defined over.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Probability of `degree`; zero beyond `k`.
    pub fn prob(&self, degree: usize) -> f64 {
        self.pmf.get(degree).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(i, p)| i as f64 * p).sum()
    }

    /// Largest degree with nonzero mass.
    pub fn max_degree(&self) -> usize {
        self.pmf.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("pmf is never empty");
        let u = rng.random::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.k)
    }

    /// The same pmf embedded in a larger block length (zero mass above the
    /// old `k`).
    pub fn padded_to(&self, k: usize) -> Result<Self> {
        if k < self.k {
            return domain(format!("cannot pad a k = {} distribution down to {k}", self.k));
        }
        let mut pmf = self.pmf.clone();
        pmf.resize(k + 1, 0.0);
        Ok(Self::from_parts(k, pmf))
    }

    /// Largest absolute pointwise difference, treating missing entries as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..=self.k.max(other.k))
            .map(|i| (self.prob(i) - other.prob(i)).abs())
            .fold(0.0, f64::max)
    }

    /// Total-variation distance.
    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * (0..=self.k.max(other.k))
            .map(|i| (self.prob(i) - other.prob(i)).abs())
            .sum::<f64>()
    }
}
