//! Acknowledgment policies.
//!
//! Feedback is ideal: the encoder sees the receiver's state before every
//! symbol it generates, at no cost. Acknowledged inputs leave the encoder's
//! eligible set, and depending on the policy the degree distribution is
//! replaced to match the shrunken block.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{AckSnapshot, Encoder};
use crate::degree::{adaptive_degree_dist, robust_soliton, DegreeDistribution, LayerConfig, RsdParams};
use crate::error::{domain, Result};

/// Degree distribution used after per-symbol acknowledgments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionMode {
    /// Robust Soliton over the `k' = k - M` remaining inputs.
    Original,
    /// The adaptive distribution `ρ` over the `L` undecoded inputs.
    Adaptive,
}

/// Which acknowledgments the receiver sends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FeedbackPolicy {
    None,
    /// Every input is acknowledged as soon as it is decoded.
    PerSymbolAck { mode: DistributionMode },
    /// A layer is acknowledged once, when it is fully decoded. With
    /// `reparameterize` the encoder switches to the Robust Soliton over the
    /// inputs still eligible; otherwise it keeps its distribution.
    LayerAck { reparameterize: bool },
}

/// Lazily built Robust Soliton and adaptive distributions for every block
/// length up to `k`, shared across trials.
#[derive(Debug)]
pub struct DistributionTables {
    params: RsdParams,
    rsd: Vec<OnceLock<Result<Arc<DegreeDistribution>>>>,
    adaptive: Vec<OnceLock<Result<Arc<DegreeDistribution>>>>,
}

impl DistributionTables {
    pub fn new(params: RsdParams) -> Result<Self> {
        params.validate()?;
        let k = params.k;
        Ok(Self {
            params,
            rsd: (0..=k).map(|_| OnceLock::new()).collect(),
            adaptive: (0..=k).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn params(&self) -> RsdParams {
        self.params
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.params.k {
            return domain(format!("block length {n} outside 1..={}", self.params.k));
        }
        Ok(())
    }

    /// Robust Soliton over `n` inputs with the configured `c` and `δ`.
    pub fn rsd(&self, n: usize) -> Result<Arc<DegreeDistribution>> {
        self.check(n)?;
        self.rsd[n]
            .get_or_init(|| robust_soliton(self.params.with_k(n)?).map(Arc::new))
            .clone()
    }

    /// Adaptive distribution `ρ` of the full-length Robust Soliton at `L`
    /// undecoded inputs.
    pub fn adaptive(&self, undecoded: usize) -> Result<Arc<DegreeDistribution>> {
        self.check(undecoded)?;
        self.adaptive[undecoded]
            .get_or_init(|| {
                let original = self.rsd(self.params.k)?;
                adaptive_degree_dist(&original, undecoded).map(Arc::new)
            })
            .clone()
    }
}

/// Applies a [`FeedbackPolicy`] to one encoder over the course of a
/// transmission.
#[derive(Debug, Clone)]
pub struct Feedback {
    policy: FeedbackPolicy,
    tables: Arc<DistributionTables>,
    acked: usize,
    layer_acked: Vec<bool>,
    messages: usize,
}

impl Feedback {
    /// `layers` is the block's partition; required for [`FeedbackPolicy::LayerAck`].
    pub fn new(policy: FeedbackPolicy, tables: Arc<DistributionTables>, layers: Option<&LayerConfig>) -> Result<Self> {
        let n_layers = layers.map_or(1, LayerConfig::len);
        if matches!(policy, FeedbackPolicy::LayerAck { .. }) && n_layers < 2 {
            return domain("layer acknowledgments need a block with at least two layers");
        }
        Ok(Self {
            policy,
            tables,
            acked: 0,
            layer_acked: vec![false; n_layers],
            messages: 0,
        })
    }

    pub fn policy(&self) -> FeedbackPolicy {
        self.policy
    }

    /// Feedback messages delivered so far (one per acknowledged input, or
    /// one per acknowledged layer).
    pub fn messages(&self) -> usize {
        self.messages
    }

    /// Brings the encoder in line with the receiver state in `snapshot`.
    pub fn apply<R: Rng>(&mut self, encoder: &mut Encoder<R>, snapshot: &AckSnapshot<'_>) -> Result<()> {
        let k = encoder.block().k();
        if snapshot.decoded.len() < self.acked {
            return domain("decoded list shrank between snapshots");
        }
        if let Some(i) = snapshot.decoded[self.acked..].iter().find(|&&i| i >= k) {
            return domain(format!("acknowledged index {i} outside block of {k}"));
        }
        match self.policy {
            FeedbackPolicy::None => {}
            FeedbackPolicy::PerSymbolAck { mode } => {
                let fresh = &snapshot.decoded[self.acked..];
                if fresh.is_empty() {
                    return Ok(());
                }
                encoder.exclude(fresh.iter().copied())?;
                self.messages += fresh.len();
                self.acked = snapshot.decoded.len();
                let left = encoder.eligible_len();
                if left > 0 {
                    let dist = match mode {
                        DistributionMode::Original => self.tables.rsd(left)?,
                        DistributionMode::Adaptive => self.tables.adaptive(left)?,
                    };
                    encoder.set_distribution(dist)?;
                }
            }
            FeedbackPolicy::LayerAck { reparameterize } => {
                if snapshot.undecoded.len() != self.layer_acked.len() {
                    return domain(format!(
                        "snapshot has {} layers, encoder {}",
                        snapshot.undecoded.len(),
                        self.layer_acked.len()
                    ));
                }
                self.acked = snapshot.decoded.len();
                if snapshot.is_complete() {
                    return Ok(());
                }
                for j in 0..self.layer_acked.len() {
                    if self.layer_acked[j] || !snapshot.layer_complete(j) {
                        continue;
                    }
                    self.layer_acked[j] = true;
                    self.messages += 1;
                    encoder.exclude_layer(j)?;
                    if reparameterize {
                        encoder.set_distribution(self.tables.rsd(encoder.eligible_len())?)?;
                    }
                }
                let nonempty = (0..self.layer_acked.len())
                    .filter(|&j| encoder.eligible_in_layer(j) > 0)
                    .count();
                if nonempty <= 1 {
                    encoder.drop_weighting();
                }
            }
        }
        Ok(())
    }
}
