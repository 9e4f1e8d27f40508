use std::sync::Arc;

use rand::seq::index;
use rand::Rng;

use super::{InputBlock, OutputSymbol};
use crate::degree::DegreeDistribution;
use crate::error::{domain, Error, Result};

const NOT_ELIGIBLE: usize = usize::MAX;

/// LT encoder over an [`InputBlock`].
///
/// Each output symbol draws a degree from the current distribution (clamped
/// to the number of eligible inputs), picks that many distinct eligible
/// inputs and XORs them. With layer weights, neighbors are drawn one at a
/// time in proportion to their layer's weight; otherwise uniformly.
#[derive(Debug, Clone)]
pub struct Encoder<R> {
    block: Arc<InputBlock>,
    distribution: Arc<DegreeDistribution>,
    layer_of: Vec<usize>,
    eligible: Vec<Vec<usize>>,
    position: Vec<usize>,
    weights: Option<Vec<f64>>,
    rng: R,
    sequence: u64,
}

impl<R: Rng> Encoder<R> {
    pub fn new(block: Arc<InputBlock>, distribution: Arc<DegreeDistribution>, rng: R) -> Result<Self> {
        check_distribution(&distribution)?;
        let layer_of = block.layer_map();
        let mut eligible: Vec<Vec<usize>> = block.layer_sizes().iter().map(|&s| Vec::with_capacity(s)).collect();
        let mut position = vec![0; block.k()];
        for (i, &j) in layer_of.iter().enumerate() {
            position[i] = eligible[j].len();
            eligible[j].push(i);
        }
        let weights = block
            .layers()
            .filter(|l| l.len() > 1)
            .map(|l| l.weights().to_vec());
        Ok(Self {
            block,
            distribution,
            layer_of,
            eligible,
            position,
            weights,
            rng,
            sequence: 0,
        })
    }

    pub fn block(&self) -> &Arc<InputBlock> {
        &self.block
    }

    pub fn distribution(&self) -> &Arc<DegreeDistribution> {
        &self.distribution
    }

    /// Replaces the degree distribution used for subsequent symbols.
    pub fn set_distribution(&mut self, distribution: Arc<DegreeDistribution>) -> Result<()> {
        check_distribution(&distribution)?;
        self.distribution = distribution;
        Ok(())
    }

    /// Switches to uniform neighbor selection.
    pub fn drop_weighting(&mut self) {
        self.weights = None;
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Number of inputs still eligible as neighbors (`k'`).
    pub fn eligible_len(&self) -> usize {
        self.eligible.iter().map(Vec::len).sum()
    }

    pub fn eligible_in_layer(&self, layer: usize) -> usize {
        self.eligible[layer].len()
    }

    pub fn is_eligible(&self, index: usize) -> bool {
        self.position.get(index).is_some_and(|&p| p != NOT_ELIGIBLE)
    }

    /// Sequence number the next symbol will carry.
    pub fn sequence_number(&self) -> u64 {
        self.sequence
    }

    /// Removes inputs from future encoding. Already excluded indices are
    /// ignored; returns how many were removed.
    pub fn exclude<I: IntoIterator<Item = usize>>(&mut self, indices: I) -> Result<usize> {
        let mut removed = 0;
        for i in indices {
            if i >= self.position.len() {
                return domain(format!("input index {i} outside block of {}", self.position.len()));
            }
            let p = self.position[i];
            if p == NOT_ELIGIBLE {
                continue;
            }
            let list = &mut self.eligible[self.layer_of[i]];
            list.swap_remove(p);
            if let Some(&moved) = list.get(p) {
                self.position[moved] = p;
            }
            self.position[i] = NOT_ELIGIBLE;
            removed += 1;
        }
        Ok(removed)
    }

    /// Removes every remaining input of `layer`.
    pub fn exclude_layer(&mut self, layer: usize) -> Result<usize> {
        if layer >= self.eligible.len() {
            return domain(format!("layer {layer} outside {} layers", self.eligible.len()));
        }
        let members = std::mem::take(&mut self.eligible[layer]);
        for &i in &members {
            self.position[i] = NOT_ELIGIBLE;
        }
        Ok(members.len())
    }

    /// Generates the next output symbol.
    pub fn encode_next(&mut self) -> Result<OutputSymbol> {
        let available = self.eligible_len();
        if available == 0 {
            return Err(Error::State("no eligible input symbols left to encode".into()));
        }
        let degree = self.distribution.sample(&mut self.rng).min(available);
        let mut neighbors = Vec::with_capacity(degree);
        match &self.weights {
            None => {
                for t in index::sample(&mut self.rng, available, degree) {
                    neighbors.push(nth(&self.eligible, t));
                }
            }
            Some(weights) => {
                let counts = layer_counts(&mut self.rng, weights, &self.eligible, degree);
                for (list, &c) in self.eligible.iter().zip(&counts) {
                    for t in index::sample(&mut self.rng, list.len(), c) {
                        neighbors.push(list[t]);
                    }
                }
            }
        }
        neighbors.sort_unstable();
        let payload = self.block.xor_of(&neighbors);
        let sequence_number = self.sequence;
        self.sequence += 1;
        Ok(OutputSymbol {
            neighbors,
            payload,
            sequence_number,
        })
    }
}

fn check_distribution(d: &DegreeDistribution) -> Result<()> {
    if d.prob(0) != 0.0 {
        return domain(format!("encoder distribution puts mass {} on degree zero", d.prob(0)));
    }
    Ok(())
}

fn nth(layers: &[Vec<usize>], mut t: usize) -> usize {
    for list in layers {
        if t < list.len() {
            return list[t];
        }
        t -= list.len();
    }
    unreachable!("index within the eligible count")
}

/// How many of `degree` sequential weighted draws land in each layer.
fn layer_counts<R: Rng + ?Sized>(rng: &mut R, weights: &[f64], eligible: &[Vec<usize>], degree: usize) -> Vec<usize> {
    let mut left: Vec<usize> = eligible.iter().map(Vec::len).collect();
    let mut counts = vec![0; left.len()];
    for _ in 0..degree {
        let total: f64 = weights.iter().zip(&left).map(|(w, &n)| w * n as f64).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = None;
        for (j, (w, &n)) in weights.iter().zip(&left).enumerate() {
            if n == 0 {
                continue;
            }
            pick = Some(j);
            u -= w * n as f64;
            if u < 0.0 {
                break;
            }
        }
        let j = pick.expect("degree never exceeds the eligible count");
        counts[j] += 1;
        left[j] -= 1;
    }
    counts
}
