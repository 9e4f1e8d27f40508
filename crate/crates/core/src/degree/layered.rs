//! Multi-layer (unequal error protection) LT codes.
//!
//! The `k` input symbols are split into contiguous layers, base layer first.
//! Every symbol of layer `j` carries a selection weight `w_j`; the encoder
//! draws neighbors sequentially in proportion to these weights, so the
//! number of neighbors per layer follows Wallenius' distribution. Within a
//! layer, decoded and undecoded symbols are equally likely, which gives a
//! central hypergeometric split per layer.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::DegreeDistribution;
use crate::combinatorics::{hypergeom_row, wallenius_pmf, wallenius_univariate_pmf, HypergeomRow, WalleniusParams};
use crate::error::{domain, Result};

/// Layer sizes and per-symbol selection weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerConfig {
    sizes: Vec<usize>,
    weights: Vec<f64>,
}

impl LayerConfig {
    pub fn new(sizes: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() {
            return domain("at least one layer is required");
        }
        if sizes.len() != weights.len() {
            return domain(format!("{} layer sizes but {} weights", sizes.len(), weights.len()));
        }
        if sizes.contains(&0) {
            return domain("layer sizes must be positive");
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return domain(format!("layer weight {w} is not strictly positive and finite"));
        }
        Ok(Self { sizes, weights })
    }

    /// One layer holding the whole block.
    pub fn single(k: usize) -> Result<Self> {
        Self::new(vec![k], vec![1.0])
    }

    /// Base layer of `alpha·k` symbols favored by `beta = p_1 / p_2`.
    pub fn two_layer(k: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::from_fractions(k, &[alpha, 1.0 - alpha], vec![beta, 1.0])
    }

    /// Layers of `fractions[j]·k` symbols; each product must be an integer.
    pub fn from_fractions(k: usize, fractions: &[f64], weights: Vec<f64>) -> Result<Self> {
        if let Some(a) = fractions.iter().find(|a| !(**a > 0.0 && **a < 1.0 + 1e-12)) {
            return domain(format!("layer fraction {a} outside (0, 1]"));
        }
        let total: f64 = fractions.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return domain(format!("layer fractions sum to {total}"));
        }
        let mut sizes = Vec::with_capacity(fractions.len());
        for a in fractions {
            let exact = a * k as f64;
            let size = exact.round();
            if (exact - size).abs() > 1e-6 {
                return domain(format!("layer fraction {a} of k = {k} is not a whole number of symbols"));
            }
            sizes.push(size as usize);
        }
        if sizes.iter().sum::<usize>() != k {
            return domain(format!("layer sizes {sizes:?} do not add up to k = {k}"));
        }
        Self::new(sizes, weights)
    }

    pub fn k(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn fractions(&self) -> Vec<f64> {
        let k = self.k() as f64;
        self.sizes.iter().map(|&s| s as f64 / k).collect()
    }

    /// Per-symbol selection probabilities `p_j`, with `Σ_j p_j · size_j = 1`.
    pub fn selection_probabilities(&self) -> Vec<f64> {
        let mass: f64 = self.sizes.iter().zip(&self.weights).map(|(&s, w)| s as f64 * w).sum();
        self.weights.iter().map(|w| w / mass).collect()
    }

    /// `β = p_1 / p_2` for two-layer configurations.
    pub fn beta(&self) -> Option<f64> {
        (self.len() == 2).then(|| self.weights[0] / self.weights[1])
    }

    /// Input indices belonging to layer `j`.
    pub fn range(&self, j: usize) -> Range<usize> {
        let start: usize = self.sizes[..j].iter().sum();
        start..start + self.sizes[j]
    }

    /// Layer holding input `index`.
    pub fn layer_of(&self, index: usize) -> usize {
        let mut end = 0;
        for (j, &s) in self.sizes.iter().enumerate() {
            end += s;
            if index < end {
                return j;
            }
        }
        panic!("index {index} beyond k = {}", self.k());
    }
}

/// Reduced degree distribution of a two-layer code over pairs
/// `(i_B', i_R')`, the undecoded neighbors in the base and refinement layers.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerReducedDist {
    undecoded_base: usize,
    undecoded_refinement: usize,
    pmf: Vec<f64>,
}

impl TwoLayerReducedDist {
    pub fn undecoded(&self) -> (usize, usize) {
        (self.undecoded_base, self.undecoded_refinement)
    }

    /// `π'(i_B', i_R')`; zero outside `[0, L_B] × [0, L_R]`.
    pub fn get(&self, base: usize, refinement: usize) -> f64 {
        if base > self.undecoded_base || refinement > self.undecoded_refinement {
            return 0.0;
        }
        self.pmf[base * (self.undecoded_refinement + 1) + refinement]
    }

    pub fn total(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// Distribution of the total reduced degree `i_B' + i_R'`.
    pub fn total_degree_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.undecoded_base + self.undecoded_refinement + 1];
        for b in 0..=self.undecoded_base {
            for r in 0..=self.undecoded_refinement {
                out[b + r] += self.get(b, r);
            }
        }
        out
    }
}

/// Precomputed Wallenius table for one two-layer configuration, reusable
/// across many `(L_B, L_R)` evaluations.
#[derive(Debug, Clone)]
pub struct TwoLayerAnalyzer {
    original: DegreeDistribution,
    base: usize,
    refinement: usize,
    /// `phi[i]`: law of the base-layer neighbor count `j` of a degree-`i`
    /// symbol, starting at `phi_lo[i]`.
    phi: Vec<Vec<f64>>,
    phi_lo: Vec<usize>,
}

impl TwoLayerAnalyzer {
    pub fn new(original: &DegreeDistribution, layers: &LayerConfig) -> Result<Self> {
        let Some(beta) = layers.beta() else {
            return domain(format!("two-layer analysis needs 2 layers, got {}", layers.len()));
        };
        if layers.k() != original.k() {
            return domain(format!(
                "layers cover {} symbols but the distribution has k = {}",
                layers.k(),
                original.k()
            ));
        }
        let (base, refinement) = (layers.sizes()[0], layers.sizes()[1]);
        let mut phi = Vec::with_capacity(original.k() + 1);
        let mut phi_lo = Vec::with_capacity(original.k() + 1);
        for i in 0..=original.k() {
            let lo = i.saturating_sub(refinement);
            let hi = i.min(base);
            let row = if original.prob(i) > 0.0 {
                (lo..=hi)
                    .map(|j| wallenius_univariate_pmf(j as u64, base as u64, refinement as u64, i as u64, beta))
                    .collect::<Result<Vec<_>>>()?
            } else {
                Vec::new()
            };
            phi.push(row);
            phi_lo.push(lo);
        }
        Ok(Self {
            original: original.clone(),
            base,
            refinement,
            phi,
            phi_lo,
        })
    }

    fn check(&self, undecoded_base: usize, undecoded_refinement: usize) -> Result<()> {
        if undecoded_base > self.base || undecoded_refinement > self.refinement {
            return domain(format!(
                "undecoded ({undecoded_base}, {undecoded_refinement}) exceeds layer sizes ({}, {})",
                self.base, self.refinement
            ));
        }
        Ok(())
    }

    /// Terms `(weight, j)` of the outer mixture: `π(i) Φ(j | i)`.
    fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.phi.iter().enumerate().flat_map(move |(i, row)| {
            let p = self.original.prob(i);
            let lo = self.phi_lo[i];
            row.iter()
                .enumerate()
                .map(move |(t, phi)| (i, lo + t, p * phi))
                .filter(|(_, _, w)| *w > 0.0)
        })
    }

    /// Full reduced distribution at `(L_B, L_R)`.
    pub fn reduced_dist(&self, undecoded_base: usize, undecoded_refinement: usize) -> Result<TwoLayerReducedDist> {
        self.check(undecoded_base, undecoded_refinement)?;
        let base_rows: Vec<HypergeomRow> = (0..=self.base)
            .map(|j| hypergeom_row(self.base, undecoded_base, j))
            .collect();
        let refinement_rows: Vec<HypergeomRow> = (0..=self.refinement)
            .map(|j| hypergeom_row(self.refinement, undecoded_refinement, j))
            .collect();
        let width = undecoded_refinement + 1;
        let mut pmf = vec![0.0; (undecoded_base + 1) * width];
        for (i, j, w) in self.terms() {
            let rb = &base_rows[j];
            let rr = &refinement_rows[i - j];
            for (tb, pb) in rb.pmf.iter().enumerate() {
                let row = &mut pmf[(rb.lo + tb) * width..];
                let wb = w * pb;
                for (tr, pr) in rr.pmf.iter().enumerate() {
                    row[rr.lo + tr] += wb * pr;
                }
            }
        }
        Ok(TwoLayerReducedDist {
            undecoded_base,
            undecoded_refinement,
            pmf,
        })
    }

    /// `π'(0, 0)` alone, the probability of a redundant symbol.
    pub fn redundancy(&self, undecoded_base: usize, undecoded_refinement: usize) -> Result<f64> {
        self.check(undecoded_base, undecoded_refinement)?;
        let base_zero: Vec<f64> = (0..=self.base)
            .map(|j| hypergeom_row(self.base, undecoded_base, j).get(0))
            .collect();
        let refinement_zero: Vec<f64> = (0..=self.refinement)
            .map(|j| hypergeom_row(self.refinement, undecoded_refinement, j).get(0))
            .collect();
        Ok(self
            .terms()
            .map(|(i, j, w)| w * base_zero[j] * refinement_zero[i - j])
            .sum())
    }
}

/// Two-layer reduced degree distribution at `(L_B, L_R)` undecoded symbols.
pub fn two_layer_reduced_dist(
    original: &DegreeDistribution,
    layers: &LayerConfig,
    undecoded_base: usize,
    undecoded_refinement: usize,
) -> Result<TwoLayerReducedDist> {
    TwoLayerAnalyzer::new(original, layers)?.reduced_dist(undecoded_base, undecoded_refinement)
}

/// Reduced degree distribution of an `N`-layer code: a dense array over
/// `i' ∈ [0, L_1] × … × [0, L_N]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredReducedDist {
    undecoded: Vec<usize>,
    pmf: Vec<f64>,
}

impl LayeredReducedDist {
    pub fn undecoded(&self) -> &[usize] {
        &self.undecoded
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    fn offset(&self, reduced: &[usize]) -> Option<usize> {
        if reduced.len() != self.undecoded.len() {
            return None;
        }
        let mut off = 0;
        for (&x, &l) in reduced.iter().zip(&self.undecoded) {
            if x > l {
                return None;
            }
            off = off * (l + 1) + x;
        }
        Some(off)
    }

    /// `π'(i')`; zero outside the support or on a dimension mismatch.
    pub fn get(&self, reduced: &[usize]) -> f64 {
        self.offset(reduced).map_or(0.0, |o| self.pmf[o])
    }

    pub fn total(&self) -> f64 {
        self.pmf.iter().sum()
    }

    /// Iterates `(i', π'(i'))` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.pmf.iter().enumerate().map(move |(mut off, &p)| {
            let mut idx = vec![0; self.undecoded.len()];
            for (slot, &l) in idx.iter_mut().zip(&self.undecoded).rev() {
                *slot = off % (l + 1);
                off /= l + 1;
            }
            (idx, p)
        })
    }

    /// Distribution of the total reduced degree `Σ_n i'_n`.
    pub fn total_degree_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.undecoded.iter().sum::<usize>() + 1];
        for (idx, p) in self.iter() {
            out[idx.iter().sum::<usize>()] += p;
        }
        out
    }
}

/// Calls `f` with every vector `j` satisfying `Σ j = total`, `0 ≤ j_n ≤ caps[n]`.
fn for_each_composition(total: usize, caps: &[usize], f: &mut impl FnMut(&[usize])) {
    fn rec(pos: usize, left: usize, caps: &[usize], cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if pos + 1 == caps.len() {
            if left <= caps[pos] {
                cur[pos] = left;
                f(cur);
            }
            return;
        }
        let rest: usize = caps[pos + 1..].iter().sum();
        for x in left.saturating_sub(rest)..=left.min(caps[pos]) {
            cur[pos] = x;
            rec(pos + 1, left - x, caps, cur, f);
        }
    }
    let mut cur = vec![0; caps.len()];
    rec(0, total, caps, &mut cur, f);
}

/// Adds `weight · ⊗_n rows[n]` into the row-major array with dimensions
/// `undecoded[n] + 1`.
fn accumulate_outer(out: &mut [f64], undecoded: &[usize], rows: &[&HypergeomRow], weight: f64) {
    fn rec(out: &mut [f64], undecoded: &[usize], rows: &[&HypergeomRow], pos: usize, base: usize, w: f64) {
        let row = rows[pos];
        let last = pos + 1 == rows.len();
        for (t, p) in row.pmf.iter().enumerate() {
            let idx = base * (undecoded[pos] + 1) + row.lo + t;
            if last {
                out[idx] += w * p;
            } else {
                rec(out, undecoded, rows, pos + 1, idx, w * p);
            }
        }
    }
    rec(out, undecoded, rows, 0, 0, weight);
}

/// `N`-layer reduced degree distribution with `undecoded[n]` unknown
/// symbols in layer `n`.
pub fn n_layer_reduced_dist(
    original: &DegreeDistribution,
    layers: &LayerConfig,
    undecoded: &[usize],
) -> Result<LayeredReducedDist> {
    if undecoded.len() != layers.len() {
        return domain(format!(
            "{} undecoded counts for {} layers",
            undecoded.len(),
            layers.len()
        ));
    }
    if layers.k() != original.k() {
        return domain(format!(
            "layers cover {} symbols but the distribution has k = {}",
            layers.k(),
            original.k()
        ));
    }
    if let Some((n, (l, s))) = undecoded
        .iter()
        .zip(layers.sizes())
        .enumerate()
        .find(|(_, (l, s))| l > s)
    {
        return domain(format!("layer {n}: {l} undecoded exceeds its size {s}"));
    }

    let sizes = layers.sizes();
    let rows: Vec<Vec<HypergeomRow>> = sizes
        .iter()
        .zip(undecoded)
        .map(|(&s, &l)| (0..=s).map(|j| hypergeom_row(s, l, j)).collect())
        .collect();
    let cells: usize = undecoded.iter().map(|l| l + 1).product();
    let mut pmf = vec![0.0; cells];
    let group_sizes: Vec<u64> = sizes.iter().map(|&s| s as u64).collect();

    let mut failure = None;
    for (i, &p) in original.pmf().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let params = if layers.len() >= 2 {
            Some(WalleniusParams::new(group_sizes.clone(), layers.weights().to_vec(), i as u64)?)
        } else {
            None
        };
        for_each_composition(i, sizes, &mut |j| {
            if failure.is_some() {
                return;
            }
            let phi = match &params {
                Some(params) => {
                    let counts: Vec<u64> = j.iter().map(|&x| x as u64).collect();
                    match wallenius_pmf(&counts, params) {
                        Ok(v) => v,
                        Err(e) => {
                            failure = Some(e);
                            return;
                        }
                    }
                }
                None => 1.0,
            };
            let w = p * phi;
            if w == 0.0 {
                return;
            }
            let selected: Vec<&HypergeomRow> = j.iter().enumerate().map(|(n, &jn)| &rows[n][jn]).collect();
            accumulate_outer(&mut pmf, undecoded, &selected, w);
        });
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LayeredReducedDist {
        undecoded: undecoded.to_vec(),
        pmf,
    })
}
