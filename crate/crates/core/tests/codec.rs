mod common;

use std::sync::Arc;

use ltfb_core::combinatorics::wallenius_univariate_pmf;
use ltfb_core::degree::robust_soliton;
use ltfb_core::sim::{run_trial, TrialConfig};
use ltfb_core::{Decoder, DegreeDistribution, Encoder, FeedbackPolicy, InputBlock, LayerConfig, RsdParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rsd_params(k: usize) -> RsdParams {
    RsdParams::new(k, 0.1, 1.0).unwrap()
}

fn block(k: usize, seed: u64) -> Arc<InputBlock> {
    Arc::new(InputBlock::random(k, 8, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap())
}

#[test]
fn unweighted_encoder_covers_inputs_uniformly() {
    let k = 100;
    let symbols = 100_000;
    let dist = Arc::new(robust_soliton(rsd_params(k)).unwrap());
    let mut enc = Encoder::new(block(k, 1), dist.clone(), ChaCha8Rng::seed_from_u64(60)).unwrap();
    let mut inclusion = vec![0.0; k];
    let mut degrees = vec![0.0; k + 1];
    for _ in 0..symbols {
        let s = enc.encode_next().unwrap();
        degrees[s.degree()] += 1.0;
        for &i in &s.neighbors {
            inclusion[i] += 1.0;
        }
    }
    // Symbols are independent, so each index's inclusion count is
    // Binomial(symbols, E[d]/k). The bound is Bonferroni-corrected over the
    // k indices at a 1% family level.
    let p = dist.mean() / k as f64;
    let sd = (symbols as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in inclusion.iter().enumerate() {
        let z = (c - symbols as f64 * p) / sd;
        assert!(z.abs() < 3.9, "index {i}: z = {z}");
    }
    let (ok, stat, crit) = common::chi_square_fits(&degrees, dist.pmf(), 0.01);
    assert!(ok, "degree chi2 {stat} >= {crit}");
}

#[test]
fn layer_counts_follow_wallenius() {
    let k = 100;
    let layers = LayerConfig::two_layer(k, 0.5, 9.0).unwrap();
    let b = Arc::new(InputBlock::random(k, 8, &mut ChaCha8Rng::seed_from_u64(2)).unwrap().with_layers(layers).unwrap());
    let dist = Arc::new(DegreeDistribution::point_mass(k, 10).unwrap());
    let mut enc = Encoder::new(b, dist, ChaCha8Rng::seed_from_u64(61)).unwrap();
    let mut observed = vec![0.0; 11];
    for _ in 0..100_000 {
        let s = enc.encode_next().unwrap();
        observed[s.neighbors.iter().filter(|&&i| i < 50).count()] += 1.0;
    }
    let probs: Vec<f64> = (0..=10).map(|x| wallenius_univariate_pmf(x, 50, 50, 10, 9.0).unwrap()).collect();
    let (ok, stat, crit) = common::chi_square_fits(&observed, &probs, 0.01);
    assert!(ok, "chi2 {stat} >= {crit}");
}

#[test]
fn weighted_base_layer_completes_strictly_first() {
    let cfg = TrialConfig {
        layers: Some(LayerConfig::two_layer(100, 0.5, 9.0).unwrap()),
        ..TrialConfig::new(rsd_params(100))
    };
    let trials = 200;
    let mut first = 0;
    for t in 0..trials {
        let trace = run_trial(&cfg, 62, t).unwrap();
        let (b, r) = (trace.layer_completion[0].unwrap(), trace.layer_completion[1].unwrap());
        assert!(b <= r);
        first += usize::from(b < r);
    }
    assert!(first as f64 >= 0.99 * trials as f64, "{first}/{trials}");
}

#[test]
fn layer_ack_trials_recover_the_block() {
    let cfg = TrialConfig {
        layers: Some(LayerConfig::two_layer(100, 0.5, 9.0).unwrap()),
        policy: FeedbackPolicy::LayerAck { reparameterize: true },
        ..TrialConfig::new(rsd_params(100))
    };
    for t in 0..50 {
        let trace = run_trial(&cfg, 63, t).unwrap();
        assert!(trace.is_complete());
        assert_eq!(trace.payload_mismatches, 0);
    }
}

#[test]
fn duplicate_symbols_are_retained_and_harmless() {
    let k = 50;
    let b = block(k, 3);
    let dist = Arc::new(robust_soliton(rsd_params(k)).unwrap());
    let mut enc = Encoder::new(b.clone(), dist, ChaCha8Rng::seed_from_u64(64)).unwrap();
    let mut dec = Decoder::for_block(&b).unwrap();
    while !dec.is_complete() {
        let s = enc.encode_next().unwrap();
        dec.receive(s.clone()).unwrap();
        let again = dec.receive(s).unwrap();
        assert_eq!(again.newly_decoded, 0);
    }
    for i in 0..k {
        assert_eq!(dec.value(i), Some(b.symbol(i)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn encoding_is_deterministic_and_decodes(k in 1usize..80, seed in any::<u64>()) {
        let b = block(k, seed);
        let dist = Arc::new(robust_soliton(rsd_params(k)).unwrap());
        let mut e1 = Encoder::new(b.clone(), dist.clone(), ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut e2 = Encoder::new(b.clone(), dist, ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut dec = Decoder::for_block(&b).unwrap();
        let mut n = 0;
        while !dec.is_complete() {
            let s = e1.encode_next().unwrap();
            prop_assert_eq!(&s, &e2.encode_next().unwrap());
            prop_assert!(s.neighbors.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(&s.payload, &b.xor_of(&s.neighbors));
            dec.receive(s).unwrap();
            n += 1;
            prop_assert!(n < 100 * k + 1000);
        }
        for i in 0..k {
            prop_assert_eq!(dec.value(i), Some(b.symbol(i)));
        }
    }
}
