//! Wallenius' noncentral hypergeometric distribution.
//!
//! Items come in groups; group `g` holds `m_g` items, each carrying weight
//! `ω_g`. Items are drawn one at a time without replacement, each remaining
//! item being picked with probability proportional to its weight. The
//! distribution is the law of the per-group counts after `n` draws:
//!
//! ```text
//! P(x) = ∏_g C(m_g, x_g) · ∫₀¹ ∏_g (1 − t^{ω_g/D})^{x_g} dt,   D = Σ_g ω_g (m_g − x_g)
//! ```
//!
//! The integral is evaluated after substituting `t = e^{-s}`, which turns
//! the integrand into `exp(g(s))` with `g` strictly concave. That keeps the
//! evaluation in log space: no under- or overflow for large groups, and the
//! quadrature sees a single smooth bump instead of a boundary layer.

use super::binomial::log_binomial;
use super::quadrature::ln_integral_log_concave;
use crate::error::{domain, Result};

/// Relative accuracy requested from the quadrature. The integral is scaled by
/// a binomial product whose result is at most one, so a relative bound on the
/// integral is an absolute bound on the probability.
const REL_TOL: f64 = 1e-13;

/// Group sizes, per-item weights and number of draws.
#[derive(Debug, Clone, PartialEq)]
pub struct WalleniusParams {
    group_sizes: Vec<u64>,
    weights: Vec<f64>,
    draws: u64,
}

impl WalleniusParams {
    pub fn new(group_sizes: Vec<u64>, weights: Vec<f64>, draws: u64) -> Result<Self> {
        if group_sizes.len() != weights.len() {
            return domain(format!(
                "{} group sizes but {} weights",
                group_sizes.len(),
                weights.len()
            ));
        }
        if group_sizes.len() < 2 {
            return domain("Wallenius' distribution needs at least two groups");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return domain(format!("weight {w} is not strictly positive and finite"));
        }
        let total: u64 = group_sizes.iter().sum();
        if draws > total {
            return domain(format!("{draws} draws from {total} items"));
        }
        Ok(Self {
            group_sizes,
            weights,
            draws,
        })
    }

    pub fn group_sizes(&self) -> &[u64] {
        &self.group_sizes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }
}

/// Probability that `draws` sequential weighted draws yield exactly `counts`
/// items per group.
pub fn wallenius_pmf(counts: &[u64], params: &WalleniusParams) -> Result<f64> {
    if counts.len() != params.group_sizes.len() {
        return domain(format!(
            "{} counts for {} groups",
            counts.len(),
            params.group_sizes.len()
        ));
    }
    if let Some((g, (x, m))) = counts
        .iter()
        .zip(&params.group_sizes)
        .enumerate()
        .find(|(_, (x, m))| x > m)
    {
        return domain(format!("count {x} exceeds size {m} of group {g}"));
    }
    let drawn: u64 = counts.iter().sum();
    if drawn != params.draws {
        return domain(format!("counts sum to {drawn}, expected {}", params.draws));
    }

    let groups: Vec<(f64, f64)> = counts
        .iter()
        .zip(&params.weights)
        .filter(|(x, _)| **x > 0)
        .map(|(x, w)| (*x as f64, *w))
        .collect();
    let remaining: f64 = counts
        .iter()
        .zip(&params.group_sizes)
        .zip(&params.weights)
        .map(|((x, m), w)| w * (m - x) as f64)
        .sum();
    let ln_binomials: f64 = counts
        .iter()
        .zip(&params.group_sizes)
        .map(|(x, m)| log_binomial(*m, *x))
        .sum();
    Ok((ln_binomials + ln_integral(&groups, remaining)).exp())
}

/// Univariate form: probability of `x` base-group items when drawing `draws`
/// items from `m1` base items and `m2` others, base items being `odds` times
/// as likely to be picked.
pub fn wallenius_univariate_pmf(x: u64, m1: u64, m2: u64, draws: u64, odds: f64) -> Result<f64> {
    if !(odds.is_finite() && odds > 0.0) {
        return domain(format!("odds {odds} is not strictly positive and finite"));
    }
    if draws > m1 + m2 {
        return domain(format!("{draws} draws from {} items", m1 + m2));
    }
    if x > m1 || x > draws || draws - x > m2 {
        return Ok(0.0);
    }
    let y = draws - x;
    let remaining = odds * (m1 - x) as f64 + (m2 - y) as f64;
    let mut groups = Vec::with_capacity(2);
    if x > 0 {
        groups.push((x as f64, odds));
    }
    if y > 0 {
        groups.push((y as f64, 1.0));
    }
    let ln_binomials = log_binomial(m1, x) + log_binomial(m2, y);
    Ok((ln_binomials + ln_integral(&groups, remaining)).exp())
}

/// `ln ∫₀¹ ∏ (1 − t^{ω/D})^{x} dt` over the `(x, ω)` pairs with `x > 0`.
fn ln_integral(groups: &[(f64, f64)], remaining_weight: f64) -> f64 {
    if groups.is_empty() {
        // Nothing drawn.
        return 0.0;
    }
    if remaining_weight <= 0.0 {
        // Every item drawn: the only possible outcome.
        return 0.0;
    }
    // With t = e^{-s}:  ∫₀^∞ exp(−s + Σ x ln(1 − e^{−a s})) ds,  a = ω / D.
    let rates: Vec<(f64, f64)> = groups
        .iter()
        .map(|&(x, w)| (x, w / remaining_weight))
        .collect();
    let g = |s: f64| {
        -s + rates
            .iter()
            .map(|&(x, a)| x * (-(-a * s).exp_m1()).ln())
            .sum::<f64>()
    };
    let dg = |s: f64| {
        -1.0 + rates
            .iter()
            .map(|&(x, a)| x * a / (a * s).exp_m1())
            .sum::<f64>()
    };
    ln_integral_log_concave(g, dg, REL_TOL)
}
