#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Upper-tail probability of a chi-square statistic.
pub fn chi2_p_value(statistic: f64, df: usize) -> f64 {
    if df == 0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(df as f64).unwrap().cdf(statistic)
}

/// Goodness of fit of observed counts against equal expected counts.
pub fn uniform_p_value(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    chi2_p_value(stat, counts.len() - 1)
}

/// Two-sample chi-square homogeneity test on categorical samples. Sparse
/// categories are pooled until every pooled cell expects at least five
/// observations in each sample.
pub fn two_sample_p_value<T: Ord + Clone>(a: &[T], b: &[T]) -> f64 {
    let mut table: BTreeMap<T, (f64, f64)> = BTreeMap::new();
    for x in a {
        table.entry(x.clone()).or_default().0 += 1.0;
    }
    for x in b {
        table.entry(x.clone()).or_default().1 += 1.0;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let n = na + nb;
    let enough = |(x, y): (f64, f64)| (x + y) * na.min(nb) / n >= 5.0;

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for &(x, y) in table.values() {
        pending = (pending.0 + x, pending.1 + y);
        if enough(pending) {
            bins.push(pending);
            pending = (0.0, 0.0);
        }
    }
    if pending.0 + pending.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => *last = (last.0 + pending.0, last.1 + pending.1),
            None => bins.push(pending),
        }
    }
    let stat: f64 = bins
        .iter()
        .map(|&(x, y)| {
            let col = x + y;
            let (ea, eb) = (col * na / n, col * nb / n);
            (x - ea).powi(2) / ea + (y - eb).powi(2) / eb
        })
        .sum();
    chi2_p_value(stat, bins.len() - 1)
}

/// Standard error of a Bernoulli proportion.
pub fn binomial_sigma(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
