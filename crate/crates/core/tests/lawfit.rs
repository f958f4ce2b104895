use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexlaw::lawfit::{
    fit_meaning_distribution, fit_meaning_frequency, fit_zipf_rank_frequency, rank_by_frequency, FitMethod,
};
use lexlaw::{CoverageStats, Dataset, Error, FreqSource, Role, WordRecordBuilder};

/// Adult-only dataset from (frequency, polysemy) pairs.
fn dataset(pairs: &[(u64, u32)]) -> Dataset {
    let records = pairs
        .iter()
        .enumerate()
        .map(|(i, &(f, m))| {
            WordRecordBuilder {
                form: format!("w{i:06}"),
                role: Role::Adult,
                childes_freq: f,
                reference_freq: Some(f),
                polysemy: Some(m),
                n_chars: 3,
                n_phonemes: None,
                n_syllables: None,
            }
            .build()
            .unwrap()
        })
        .collect();
    let n = pairs.len() as u64;
    let tokens: u64 = pairs.iter().map(|p| p.0).sum();
    let mut cov = BTreeMap::new();
    cov.insert(Role::Adult, CoverageStats::new(n, n, tokens, tokens).unwrap());
    Dataset::new("test", records, cov).unwrap()
}

#[test]
fn meaning_frequency_exact_square_root() {
    let pairs: Vec<(u64, u32)> = (1..=200u32).map(|k| (u64::from(k * k), k)).collect();
    let fit = fit_meaning_frequency(&dataset(&pairs), Role::Adult, FreqSource::Childes).unwrap();
    assert_abs_diff_eq!(fit.exponent, 0.5, epsilon = 1e-12);
    assert_abs_diff_eq!(fit.r_squared_loglog, 1.0, epsilon = 1e-12);
    assert_eq!(fit.n_points, 200);
}

#[test]
fn meaning_frequency_constant_meanings() {
    let pairs: Vec<(u64, u32)> = (1..=50u64).map(|f| (f * 3, 4)).collect();
    let fit = fit_meaning_frequency(&dataset(&pairs), Role::Adult, FreqSource::Reference).unwrap();
    assert_abs_diff_eq!(fit.exponent, 0.0, epsilon = 1e-12);
}

#[test]
fn meaning_frequency_with_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs: Vec<(u64, u32)> = (1..=2000u64)
        .map(|i| {
            let f = 10 * i * i;
            let m = (f as f64).sqrt() * (1.0 + rng.random_range(-0.1..0.1));
            (f, m.round().max(1.0) as u32)
        })
        .collect();
    let fit = fit_meaning_frequency(&dataset(&pairs), Role::Adult, FreqSource::Childes).unwrap();
    assert!((fit.exponent - 0.5).abs() < 0.05, "delta = {}", fit.exponent);
}

#[test]
fn meaning_frequency_needs_the_role() {
    let pairs: Vec<(u64, u32)> = (1..=10u32).map(|k| (u64::from(k), k)).collect();
    let err = fit_meaning_frequency(&dataset(&pairs), Role::Child, FreqSource::Childes).unwrap_err();
    assert!(matches!(err, Error::TooFew { .. }));
}

#[test]
fn meaning_distribution_single_bin_is_an_error() {
    let pairs: Vec<(u64, u32)> = (1..=300u32).map(|k| (u64::from(1000 - k), 1 + k % 5)).collect();
    let ds = dataset(&pairs);
    for method in FitMethod::ALL {
        let err = fit_meaning_distribution(&ds, Role::Adult, FreqSource::Childes, 300, method).unwrap_err();
        assert!(matches!(err, Error::TooFew { need: 3, got: 1 }), "{err}");
        let err = fit_meaning_distribution(&ds, Role::Adult, FreqSource::Childes, 301, method).unwrap_err();
        assert!(matches!(err, Error::NoCompleteBin { .. }), "{err}");
    }
}

#[test]
fn meaning_distribution_unit_bins_recover_rank_law() {
    // m_i = 40000 i^-0.5 rounded; descending frequency makes word i rank i.
    let pairs: Vec<(u64, u32)> = (1..=400u64)
        .map(|i| {
            let m = 40_000.0 / (i as f64).sqrt();
            (100_000 - i, m.round() as u32)
        })
        .collect();
    let ds = dataset(&pairs);
    let fit = fit_meaning_distribution(&ds, Role::Adult, FreqSource::Childes, 1, FitMethod::OlsLoglog).unwrap();
    assert_abs_diff_eq!(fit.exponent, -0.5, epsilon = 1e-4);
    assert_eq!(fit.n_points, 400);
    let coarse = fit_meaning_distribution(&ds, Role::Adult, FreqSource::Childes, 10, FitMethod::OlsLoglog).unwrap();
    assert_eq!(coarse.n_points, 40);
}

#[test]
fn zipf_exact_and_constant() {
    let forms: Vec<String> = (1..=60).map(|i| format!("w{i:02}")).collect();
    let lex = rank_by_frequency(forms.iter().enumerate().map(|(i, w)| (w.as_str(), 5_040_000 / (i as u64 + 1))))
        .unwrap();
    // 5040000 / i is floored when i does not divide it, hence the tolerance.
    let fit = fit_zipf_rank_frequency(&lex).unwrap();
    assert_abs_diff_eq!(fit.exponent, -1.0, epsilon = 1e-5);

    let lex = rank_by_frequency(forms.iter().map(|w| (w.as_str(), 9))).unwrap();
    assert_abs_diff_eq!(fit_zipf_rank_frequency(&lex).unwrap().exponent, 0.0, epsilon = 1e-12);
}

#[test]
fn zipf_with_multiplicative_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let forms: Vec<String> = (1..=3000).map(|i| format!("w{i:05}")).collect();
    let mut freqs: Vec<u64> = (1..=3000u64)
        .map(|i| (1e8 / i as f64 * (1.0 + rng.random_range(-0.05..0.05))).round() as u64)
        .collect();
    freqs.sort_unstable_by(|a, b| b.cmp(a));
    let lex = rank_by_frequency(forms.iter().map(String::as_str).zip(freqs)).unwrap();
    let fit = fit_zipf_rank_frequency(&lex).unwrap();
    assert!((fit.exponent + 1.0).abs() < 0.05, "alpha = {}", -fit.exponent);
}
