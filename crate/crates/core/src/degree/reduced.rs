//! Reduced degree distributions of single-layer LT codes.
//!
//! When `L` of the `k` input symbols are still undecoded, a received symbol
//! of degree `i` keeps only the neighbors that fall among the undecoded
//! ones; the count is hypergeometric. Mixing over the encoder's degree
//! distribution gives the reduced distribution the decoder actually sees.

use super::DegreeDistribution;
use crate::combinatorics::{avoid_probability, hypergeom_row};
use crate::error::{domain, Result};

/// Mixes hypergeometric thinning over `pmf`, for an encoder drawing
/// neighbors uniformly from `block` symbols of which `undecoded` are still
/// unknown. Degrees above `block` are clamped to `block`, as the encoder does.
fn thin(pmf: &[f64], block: usize, undecoded: usize, out_len: usize) -> Vec<f64> {
    let mut out = vec![0.0; out_len];
    for (degree, &p) in pmf.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let row = hypergeom_row(block, undecoded, degree.min(block));
        for (t, q) in row.pmf.iter().enumerate() {
            out[row.lo + t] += p * q;
        }
    }
    out
}

fn check_undecoded(original: &DegreeDistribution, undecoded: usize) -> Result<()> {
    if undecoded > original.k() {
        return domain(format!(
            "{undecoded} undecoded symbols out of k = {}",
            original.k()
        ));
    }
    Ok(())
}

fn check_acked(original: &DegreeDistribution, undecoded: usize, acked: usize) -> Result<()> {
    check_undecoded(original, undecoded)?;
    if acked > original.k() - undecoded {
        return domain(format!(
            "{acked} acknowledged symbols but only {} decoded",
            original.k() - undecoded
        ));
    }
    Ok(())
}

/// Reduced degree distribution with `undecoded` of the `k` input symbols
/// still unknown. Indexed `0..=k`; zero above `undecoded`.
pub fn reduced_degree_dist(original: &DegreeDistribution, undecoded: usize) -> Result<DegreeDistribution> {
    check_undecoded(original, undecoded)?;
    let k = original.k();
    Ok(DegreeDistribution::from_parts(
        k,
        thin(original.pmf(), k, undecoded, k + 1),
    ))
}

/// Probability that a received symbol is redundant (reduced degree zero),
/// evaluated as `Σ π(i) C(k-L, i) / C(k, i)`.
pub fn redundancy_prob(original: &DegreeDistribution, undecoded: usize) -> Result<f64> {
    redundancy_prob_acked(original, undecoded, 0)
}

/// Reduced degree distribution when `acked` decoded symbols have been
/// acknowledged and excluded from encoding: the encoder applies `original`
/// over the `k - acked` remaining symbols, of which `undecoded` are unknown.
///
/// Degrees above `k - acked` are clamped. With `acked = k - undecoded` the
/// result is `original` itself whenever `original` has no mass above
/// `undecoded`.
pub fn reduced_degree_dist_acked(
    original: &DegreeDistribution,
    undecoded: usize,
    acked: usize,
) -> Result<DegreeDistribution> {
    check_acked(original, undecoded, acked)?;
    let k = original.k();
    Ok(DegreeDistribution::from_parts(
        k,
        thin(original.pmf(), k - acked, undecoded, k + 1),
    ))
}

/// `π'(0)` with `acked` symbols acknowledged:
/// `Σ_i π(i) C(k-M-L, i) / C(k-M, i)`.
///
/// Strictly decreasing in `acked` for `undecoded ≥ 1`.
pub fn redundancy_prob_acked(original: &DegreeDistribution, undecoded: usize, acked: usize) -> Result<f64> {
    check_acked(original, undecoded, acked)?;
    let block = original.k() - acked;
    Ok(original
        .pmf()
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(i, p)| p * avoid_probability(block, undecoded, i.min(block)))
        .sum())
}

/// Degree distribution for an encoder that only draws from the `undecoded`
/// symbols (all decoded ones acknowledged) while reproducing the reduced
/// distribution a feedback-free encoder would induce, minus its redundant
/// symbols:
///
/// `ρ(i) = Σ_j π(j) C(L,i) C(k-L,j-i) / ((1 - π'(0)) C(k,j))`, `1 ≤ i ≤ L`.
///
/// The result is defined over a block of `undecoded` symbols.
pub fn adaptive_degree_dist(original: &DegreeDistribution, undecoded: usize) -> Result<DegreeDistribution> {
    if undecoded == 0 {
        return domain("adaptive distribution needs at least one undecoded symbol");
    }
    check_undecoded(original, undecoded)?;
    let k = original.k();
    let redundant = redundancy_prob(original, undecoded)?;
    let keep = 1.0 - redundant;
    if keep <= 0.0 {
        return domain("every symbol would be redundant");
    }
    let mut rho = vec![0.0; undecoded + 1];
    for (degree, &p) in original.pmf().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let row = hypergeom_row(k, undecoded, degree);
        for (t, q) in row.pmf.iter().enumerate() {
            let i = row.lo + t;
            if i >= 1 {
                rho[i] += p * q / keep;
            }
        }
    }
    Ok(DegreeDistribution::from_parts(undecoded, rho))
}
