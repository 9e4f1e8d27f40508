//! Transmission over a memoryless erasure channel, plus the experiment
//! drivers built on it.
//!
//! Every trial owns its encoder, decoder and random streams. A trial's
//! streams are derived from the master seed and the trial index alone, so
//! results do not depend on how trials are scheduled across threads.

mod distortion;
mod experiments;
mod trace;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::{Decoder, Encoder, InputBlock, DEFAULT_WIDTH};
use crate::degree::{LayerConfig, RsdParams};
use crate::error::{domain, Result};
use crate::feedback::{DistributionTables, Feedback, FeedbackPolicy};

pub use distortion::RateDistortionModel;
pub use experiments::{
    mean_and_std_err, welch_t, DistortionExperiment, DistortionResult, SchemeResult, SingleLayerExperiment,
    TwoLayerExperiment,
};
pub use trace::{TraceRecord, TransmissionTrace};

/// Memoryless symbol erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Symbol erasure rate.
    pub ser: f64,
}

impl ChannelParams {
    pub fn new(ser: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ser) {
            return domain(format!("symbol erasure rate {ser} outside [0, 1]"));
        }
        Ok(Self { ser })
    }

    pub fn lossless() -> Self {
        Self { ser: 0.0 }
    }

    pub fn erases<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.random::<f64>() < self.ser
    }
}

/// What a deadline counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeadlineBasis {
    /// Transmission slots, erased symbols included.
    Sent,
    /// Symbols that made it through the channel.
    Received,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deadline {
    pub symbols: u64,
    pub basis: DeadlineBasis,
}

/// Everything that defines one kind of trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Robust Soliton parameters over the full block; `rsd.k` is the block length.
    pub rsd: RsdParams,
    pub width: usize,
    pub layers: Option<LayerConfig>,
    pub policy: FeedbackPolicy,
    pub channel: ChannelParams,
    pub deadline: Option<Deadline>,
}

impl TrialConfig {
    /// Lossless, unlayered, no feedback, run to completion.
    pub fn new(rsd: RsdParams) -> Self {
        Self {
            rsd,
            width: DEFAULT_WIDTH,
            layers: None,
            policy: FeedbackPolicy::None,
            channel: ChannelParams::lossless(),
            deadline: None,
        }
    }

    pub fn k(&self) -> usize {
        self.rsd.k
    }

    pub fn validate(&self) -> Result<()> {
        self.rsd.validate()?;
        ChannelParams::new(self.channel.ser)?;
        if self.width == 0 {
            return domain("payload width must be at least one byte");
        }
        if let Some(layers) = &self.layers {
            if layers.k() != self.k() {
                return domain(format!("layers cover {} symbols, k = {}", layers.k(), self.k()));
            }
        }
        if matches!(self.policy, FeedbackPolicy::LayerAck { .. }) && self.layers.as_ref().is_none_or(|l| l.len() < 2) {
            return domain("layer acknowledgments need at least two layers");
        }
        Ok(())
    }
}

/// Derives the random stream of trial `trial` under `master_seed`.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// A validated [`TrialConfig`] with its distribution tables.
#[derive(Debug, Clone)]
pub struct TrialRunner {
    config: TrialConfig,
    tables: Arc<DistributionTables>,
}

impl TrialRunner {
    pub fn new(config: TrialConfig) -> Result<Self> {
        let tables = Arc::new(DistributionTables::new(config.rsd)?);
        Self::with_tables(config, tables)
    }

    /// Shares tables built for the same Robust Soliton parameters.
    pub fn with_tables(config: TrialConfig, tables: Arc<DistributionTables>) -> Result<Self> {
        config.validate()?;
        if tables.params() != config.rsd {
            return domain("distribution tables were built for different parameters");
        }
        Ok(Self { config, tables })
    }

    pub fn config(&self) -> &TrialConfig {
        &self.config
    }

    /// Runs trial `trial` of the experiment seeded with `master_seed`.
    pub fn run(&self, master_seed: u64, trial: u64) -> Result<TransmissionTrace> {
        self.run_with(&mut trial_rng(master_seed, trial))
    }

    /// Runs one trial drawing the block, encoder and channel streams from `rng`.
    pub fn run_with(&self, rng: &mut ChaCha8Rng) -> Result<TransmissionTrace> {
        let cfg = &self.config;
        let mut block_rng = ChaCha8Rng::from_rng(&mut *rng);
        let encoder_rng = ChaCha8Rng::from_rng(&mut *rng);
        let mut channel_rng = ChaCha8Rng::from_rng(&mut *rng);

        let mut block = InputBlock::random(cfg.k(), cfg.width, &mut block_rng)?;
        if let Some(layers) = &cfg.layers {
            block = block.with_layers(layers.clone())?;
        }
        let block = Arc::new(block);
        let mut encoder = Encoder::new(block.clone(), self.tables.rsd(cfg.k())?, encoder_rng)?;
        let mut decoder = Decoder::for_block(&block)?;
        let mut feedback = Feedback::new(cfg.policy, self.tables.clone(), block.layers())?;
        let mut trace = TransmissionTrace::new(block.layer_sizes());

        // Nothing can ever arrive; only a deadline on sent symbols makes
        // the loop below terminate.
        let sent_deadline = matches!(cfg.deadline, Some(Deadline { basis: DeadlineBasis::Sent, .. }));
        if cfg.channel.ser >= 1.0 && !sent_deadline {
            return Ok(trace);
        }

        let mut sent = 0u64;
        while !decoder.is_complete() {
            if let Some(d) = cfg.deadline {
                let count = match d.basis {
                    DeadlineBasis::Sent => sent,
                    DeadlineBasis::Received => decoder.received(),
                };
                if count >= d.symbols {
                    break;
                }
            }
            feedback.apply(&mut encoder, &decoder.snapshot())?;
            let symbol = encoder.encode_next()?;
            sent += 1;
            if cfg.channel.erases(&mut channel_rng) {
                continue;
            }
            let before = decoder.decoded_indices().len();
            let reception = decoder.receive(symbol)?;
            for &i in &decoder.decoded_indices()[before..] {
                if decoder.value(i) != Some(block.symbol(i)) {
                    trace.payload_mismatches += 1;
                }
            }
            trace.push(
                TraceRecord {
                    sent,
                    received: decoder.received(),
                    reduced_degree: reception.reduced_degree,
                    newly_decoded: reception.newly_decoded,
                },
                decoder.undecoded_per_layer(),
            );
        }
        trace.sent = sent;
        trace.feedback_messages = feedback.messages();
        Ok(trace)
    }
}

/// Runs a single trial of `config`.
pub fn run_trial(config: &TrialConfig, master_seed: u64, trial: u64) -> Result<TransmissionTrace> {
    TrialRunner::new(config.clone())?.run(master_seed, trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedback::DistributionMode;

    fn rsd(k: usize) -> RsdParams {
        RsdParams::new(k, 0.1, 1.0).unwrap()
    }

    #[test]
    fn full_erasure_receives_nothing() {
        let mut cfg = TrialConfig::new(rsd(50));
        cfg.channel = ChannelParams::new(1.0).unwrap();
        cfg.deadline = Some(Deadline { symbols: 100, basis: DeadlineBasis::Sent });
        let t = run_trial(&cfg, 1, 0).unwrap();
        assert_eq!(t.sent, 100);
        assert_eq!(t.received(), 0);
        assert_eq!(t.total_undecoded_after(0), 50);
        assert_eq!(t.decoded_layer_prefix(), 0);

        cfg.deadline = None;
        assert_eq!(run_trial(&cfg, 1, 0).unwrap().sent, 0);
    }

    #[test]
    fn single_symbol_block_needs_one_reception() {
        let t = run_trial(&TrialConfig::new(RsdParams::new(1, 0.1, 1.0).unwrap()), 3, 0).unwrap();
        assert_eq!(t.completion(), Some(1));
        assert_eq!(t.overhead(), Some(0.0));
    }

    #[test]
    fn trace_is_monotone_and_sound() {
        let mut cfg = TrialConfig::new(rsd(200));
        cfg.channel = ChannelParams::new(0.3).unwrap();
        for trial in 0..10 {
            let t = run_trial(&cfg, 11, trial).unwrap();
            assert!(t.is_complete());
            assert_eq!(t.payload_mismatches, 0);
            assert!(t.overhead().unwrap() >= 0.0);
            for w in t.records.windows(2) {
                assert!(w[0].received < w[1].received && w[0].sent < w[1].sent);
            }
            for r in 1..=t.records.len() {
                assert!(t.total_undecoded_after(r) <= t.total_undecoded_after(r - 1));
            }
            assert!(t.sent >= t.received());
        }
    }

    #[test]
    fn deterministic_per_trial_index() {
        let cfg = TrialConfig {
            policy: FeedbackPolicy::PerSymbolAck { mode: DistributionMode::Adaptive },
            ..TrialConfig::new(rsd(100))
        };
        let runner = TrialRunner::new(cfg).unwrap();
        let a = runner.run(5, 7).unwrap();
        let _ = runner.run(5, 8).unwrap();
        assert_eq!(a, runner.run(5, 7).unwrap());
        assert_ne!(a, runner.run(5, 8).unwrap());
    }

    #[test]
    fn received_deadline() {
        let mut cfg = TrialConfig::new(rsd(100));
        cfg.channel = ChannelParams::new(0.5).unwrap();
        cfg.deadline = Some(Deadline { symbols: 20, basis: DeadlineBasis::Received });
        let t = run_trial(&cfg, 0, 0).unwrap();
        assert_eq!(t.received(), 20);
        assert!(t.sent >= 20);
    }

    #[test]
    fn invalid_configs() {
        assert!(ChannelParams::new(1.5).is_err());
        let cfg = TrialConfig {
            policy: FeedbackPolicy::LayerAck { reparameterize: true },
            ..TrialConfig::new(rsd(100))
        };
        assert!(TrialRunner::new(cfg).is_err());
        let cfg = TrialConfig {
            layers: Some(LayerConfig::two_layer(50, 0.5, 2.0).unwrap()),
            ..TrialConfig::new(rsd(100))
        };
        assert!(TrialRunner::new(cfg).is_err());
    }
}
