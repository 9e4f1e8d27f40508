mod common;

use ltfb_core::combinatorics::{
    hypergeom_pmf, log_binomial, wallenius_pmf, wallenius_univariate_pmf, weighted_sample_without_replacement,
    WalleniusParams,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn log_binomial_examples() {
    assert_eq!(log_binomial(5, 0), 0.0);
    assert!((log_binomial(6, 3) - 20f64.ln()).abs() < 1e-15);
    assert_eq!(log_binomial(3, 4), f64::NEG_INFINITY);
}

#[test]
fn hypergeometric_examples() {
    assert_eq!(hypergeom_pmf(0, 10, 0, 3), 1.0);
    assert!((hypergeom_pmf(1, 2, 1, 1) - 0.5).abs() < 1e-15);
    assert!((hypergeom_pmf(2, 6, 3, 3) - 0.45).abs() < 1e-15);
}

/// Ten sequential weighted draws from 50 heavy (weight 9) and 50 light
/// items, repeated 10⁶ times.
#[test]
fn wallenius_matches_urn_simulation() {
    let samples = 1_000_000;
    let h = common::parallel_histogram(11, samples, 41, |rng| {
        common::urn_group_counts(&[50, 50], &[9.0, 1.0], 10, rng)[0]
    });
    let params = WalleniusParams::new(vec![50, 50], vec![9.0, 1.0], 10).unwrap();
    for x in [9usize, 10, 8, 7] {
        let p = wallenius_pmf(&[x as u64, 10 - x as u64], &params).unwrap();
        let observed = h[x] / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((observed - p).abs() < 3.0 * se, "x = {x}: {observed} vs {p} (se {se})");
    }
}

#[test]
fn weighted_sampler_marginals_follow_wallenius_for_three_groups() {
    let sizes = [10usize, 20, 30];
    let weights = [5.0, 2.0, 1.0];
    let item_weights: Vec<f64> = sizes
        .iter()
        .zip(weights)
        .flat_map(|(&s, w)| std::iter::repeat_n(w, s))
        .collect();
    let n = 8;
    let params = WalleniusParams::new(sizes.iter().map(|&s| s as u64).collect(), weights.to_vec(), n as u64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let trials = 50_000;
    let mut observed = vec![0.0; n + 1];
    for _ in 0..trials {
        let s = weighted_sample_without_replacement(&item_weights, n, &mut rng).unwrap();
        observed[s.iter().filter(|&&i| i < 10).count()] += 1.0;
    }
    // Marginal of the first group: sum the joint pmf over the others.
    let probs: Vec<f64> = (0..=n as u64)
        .map(|x| {
            (0..=(n as u64 - x))
                .map(|y| wallenius_pmf(&[x, y, n as u64 - x - y], &params).unwrap())
                .sum()
        })
        .collect();
    let (ok, stat, crit) = common::chi_square_fits(&observed, &probs, 0.01);
    assert!(ok, "chi2 {stat} >= {crit}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypergeometric_is_normalized(population in 0u64..300, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let successes = (a * population as f64) as u64;
        let draws = (b * population as f64) as u64;
        let total: f64 = (0..=draws as i64).map(|x| hypergeom_pmf(x, population, successes, draws)).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_group_wallenius_is_normalized(m1 in 1u64..100, m2 in 1u64..100, odds in 0.05f64..20.0, frac in 0.0f64..=1.0) {
        let n = (frac * (m1 + m2) as f64) as u64;
        let total: f64 = (0..=n).map(|x| wallenius_univariate_pmf(x, m1, m2, n, odds).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), n in 0usize..30) {
        let weights: Vec<f64> = (1..=30).map(|i| f64::from(i % 7 + 1)).collect();
        let a = weighted_sample_without_replacement(&weights, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = weighted_sample_without_replacement(&weights, n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), n);
    }
}
