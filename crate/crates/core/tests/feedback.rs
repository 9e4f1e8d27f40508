mod common;

use std::sync::Arc;

use ltfb_core::sim::{run_trial, TrialConfig};
use ltfb_core::{
    Decoder, DistributionMode, DistributionTables, Encoder, Feedback, FeedbackPolicy, InputBlock, LayerConfig,
    RsdParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rsd_params(k: usize) -> RsdParams {
    RsdParams::new(k, 0.1, 1.0).unwrap()
}

struct Session {
    block: Arc<InputBlock>,
    encoder: Encoder<ChaCha8Rng>,
    decoder: Decoder,
    feedback: Feedback,
}

fn session(k: usize, policy: FeedbackPolicy, layers: Option<LayerConfig>, seed: u64) -> Session {
    let tables = Arc::new(DistributionTables::new(rsd_params(k)).unwrap());
    let mut block = InputBlock::random(k, 8, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    if let Some(l) = layers {
        block = block.with_layers(l).unwrap();
    }
    let block = Arc::new(block);
    Session {
        encoder: Encoder::new(block.clone(), tables.rsd(k).unwrap(), ChaCha8Rng::seed_from_u64(seed + 1)).unwrap(),
        decoder: Decoder::for_block(&block).unwrap(),
        feedback: Feedback::new(policy, tables, block.layers()).unwrap(),
        block,
    }
}

#[test]
fn original_mode_frozen_state_uses_the_remaining_robust_soliton() {
    let k = 100;
    let mut s = session(k, FeedbackPolicy::PerSymbolAck { mode: DistributionMode::Original }, None, 70);
    // A fixed reception count; one symbol can cascade through the block.
    for _ in 0..40 {
        s.feedback.apply(&mut s.encoder, &s.decoder.snapshot()).unwrap();
        let sym = s.encoder.encode_next().unwrap();
        s.decoder.receive(sym).unwrap();
    }
    s.feedback.apply(&mut s.encoder, &s.decoder.snapshot()).unwrap();
    let remaining = s.decoder.undecoded();
    assert!((1..k).contains(&remaining), "{remaining} inputs left");
    let expected = DistributionTables::new(rsd_params(k)).unwrap().rsd(remaining).unwrap();
    let mut observed = vec![0.0; remaining + 1];
    for _ in 0..100_000 {
        let sym = s.encoder.encode_next().unwrap();
        assert!(sym.neighbors.iter().all(|&i| !s.decoder.is_decoded(i)));
        observed[sym.degree()] += 1.0;
    }
    assert_eq!(observed[0], 0.0);
    let (ok, stat, crit) = common::chi_square_fits(&observed, expected.pmf(), 0.01);
    assert!(ok, "chi2 {stat} >= {crit}");
}

#[test]
fn acknowledged_inputs_never_reappear() {
    for mode in [DistributionMode::Original, DistributionMode::Adaptive] {
        for seed in 0..20 {
            let mut s = session(200, FeedbackPolicy::PerSymbolAck { mode }, None, 100 * seed);
            while !s.decoder.is_complete() {
                s.feedback.apply(&mut s.encoder, &s.decoder.snapshot()).unwrap();
                let sym = s.encoder.encode_next().unwrap();
                assert!(sym.neighbors.iter().all(|&i| !s.decoder.is_decoded(i)));
                let reception = s.decoder.receive(sym).unwrap();
                assert!(!reception.is_redundant());
            }
            for i in 0..200 {
                assert_eq!(s.decoder.value(i), Some(s.block.symbol(i)));
            }
        }
    }
}

#[test]
fn layer_acknowledgment_fires_at_most_once() {
    let layers = LayerConfig::two_layer(100, 0.5, 9.0).unwrap();
    for reparameterize in [true, false] {
        let mut s = session(100, FeedbackPolicy::LayerAck { reparameterize }, Some(layers.clone()), 71);
        let mut after_ack = 0;
        while !s.decoder.is_complete() {
            s.feedback.apply(&mut s.encoder, &s.decoder.snapshot()).unwrap();
            assert!(s.feedback.messages() <= 1);
            let sym = s.encoder.encode_next().unwrap();
            if s.feedback.messages() == 1 {
                assert!(sym.neighbors.iter().all(|&i| i >= 50));
                after_ack += 1;
            }
            s.decoder.receive(sym).unwrap();
        }
        assert!(after_ack > 0);
    }

    let cfg = TrialConfig {
        layers: Some(layers),
        policy: FeedbackPolicy::LayerAck { reparameterize: true },
        ..TrialConfig::new(rsd_params(100))
    };
    for t in 0..200 {
        assert!(run_trial(&cfg, 72, t).unwrap().feedback_messages <= 1);
    }
}
