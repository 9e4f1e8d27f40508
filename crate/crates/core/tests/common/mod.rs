//! Independent Monte Carlo oracles and goodness-of-fit helpers shared by
//! the integration tests. None of these call into the library's samplers.

#![allow(dead_code)]

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Degree drawn by a linear scan of the pmf.
pub fn draw_degree<R: Rng>(pmf: &[f64], rng: &mut R) -> usize {
    let mut u = rng.random::<f64>() * pmf.iter().sum::<f64>();
    for (i, p) in pmf.iter().enumerate() {
        u -= p;
        if u < 0.0 {
            return i;
        }
    }
    pmf.iter().rposition(|&p| p > 0.0).unwrap()
}

/// Runs `samples` independent draws split over a fixed number of seeded
/// chunks and sums the per-chunk histograms.
pub fn parallel_histogram<F>(bins: usize, samples: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    const CHUNKS: usize = 64;
    (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let n = samples / CHUNKS + usize::from(c < samples % CHUNKS);
            let mut h = vec![0.0; bins];
            for _ in 0..n {
                h[draw(&mut rng)] += 1.0;
            }
            h
        })
        .reduce(|| vec![0.0; bins], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
}

/// Empirical reduced-degree distribution: draw a degree from `pmf` over a
/// block of `block` inputs, pick that many distinct inputs uniformly and
/// count those among the first `undecoded`.
pub fn mc_reduced(pmf: &[f64], block: usize, undecoded: usize, samples: usize, seed: u64) -> Vec<f64> {
    let h = parallel_histogram(block + 1, samples, seed, |rng| {
        let d = draw_degree(pmf, rng).min(block);
        index::sample(rng, block, d).iter().filter(|&i| i < undecoded).count()
    });
    h.into_iter().map(|x| x / samples as f64).collect()
}

/// Group of each of `degree` sequential weighted draws (the urn model):
/// group `g` is picked with probability proportional to
/// `weights[g] · remaining[g]`.
pub fn urn_group_counts<R: Rng>(sizes: &[usize], weights: &[f64], degree: usize, rng: &mut R) -> Vec<usize> {
    let mut left = sizes.to_vec();
    let mut counts = vec![0; sizes.len()];
    for _ in 0..degree {
        let total: f64 = left.iter().zip(weights).map(|(&n, w)| n as f64 * w).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = 0;
        for g in 0..left.len() {
            if left[g] == 0 {
                continue;
            }
            pick = g;
            u -= left[g] as f64 * weights[g];
            if u < 0.0 {
                break;
            }
        }
        counts[pick] += 1;
        left[pick] -= 1;
    }
    counts
}

/// Reduced degrees per layer of one multi-layer output symbol: the layer
/// counts come from the urn, inputs within a layer are uniform, and the
/// first `undecoded[n]` inputs of layer `n` are the undecoded ones.
pub fn mc_layered_symbol<R: Rng>(
    pmf: &[f64],
    sizes: &[usize],
    weights: &[f64],
    undecoded: &[usize],
    rng: &mut R,
) -> Vec<usize> {
    let k: usize = sizes.iter().sum();
    let d = draw_degree(pmf, rng).min(k);
    let counts = urn_group_counts(sizes, weights, d, rng);
    counts
        .iter()
        .enumerate()
        .map(|(n, &j)| index::sample(rng, sizes[n], j).iter().filter(|&i| i < undecoded[n]).count())
        .collect()
}

/// Total-variation distance between two pmfs (missing entries are zero).
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().max(b.len());
    0.5 * (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

/// Chi-square statistic after merging adjacent cells until each expected
/// count reaches 5 (a short tail joins the last cell); returns the
/// statistic and the degrees of freedom.
pub fn pooled_chi_square(observed: &[f64], expected: &[f64]) -> (f64, usize) {
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        o_acc += o;
        e_acc += e;
        if e_acc >= 5.0 {
            cells.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    match cells.last_mut() {
        Some(last) => {
            last.0 += o_acc;
            last.1 += e_acc;
        }
        None => return (0.0, 0),
    }
    let stat = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    (stat, cells.len() - 1)
}

/// Goodness-of-fit of `observed` counts against `probs` at `level`.
/// Returns `(passed, statistic, critical value)`.
pub fn chi_square_fits(observed: &[f64], probs: &[f64], level: f64) -> (bool, f64, f64) {
    let n: f64 = observed.iter().sum();
    let expected: Vec<f64> = probs.iter().map(|p| p * n).collect();
    let (stat, dof) = pooled_chi_square(observed, &expected);
    let critical = ChiSquared::new(dof.max(1) as f64).unwrap().inverse_cdf(1.0 - level);
    (stat < critical, stat, critical)
}
