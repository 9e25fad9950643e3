//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::hash::Hash;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use subcount::oracle::enumerate_multigraphs;
use subcount::WeightSpec;

/// Exact law of every canonical `(n, m)`-sequence under the weights
/// `prod_v delta_{deg v}` (uniform without weights).
pub fn host_law(n: usize, m: usize, delta: Option<&WeightSpec>) -> BTreeMap<Vec<u32>, f64> {
    let weights: Vec<(Vec<u32>, BigRational)> = enumerate_multigraphs(n, m)
        .unwrap()
        .map(|g| {
            let w = match delta {
                None => BigRational::one(),
                Some(d) => g.degrees().iter().map(|&k| d.exact_delta(k as usize).unwrap()).product(),
            };
            (g.sequence().to_vec(), w)
        })
        .collect();
    let total: BigRational = weights.iter().map(|(_, w)| w.clone()).sum();
    weights
        .into_iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(s, w)| (s, (w / &total).to_f64().unwrap()))
        .collect()
}

pub fn tally<K: Ord>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, u64> {
    let mut out = BTreeMap::new();
    for k in items {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

/// Two-sample chi-square on equal-size samples; returns the p-value.
pub fn chi2_two_sample<K: Ord + Clone + Hash>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let mut keys: Vec<K> = a.keys().chain(b.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let stat: f64 = keys
        .iter()
        .map(|k| {
            let (x, y) = (*a.get(k).unwrap_or(&0) as f64, *b.get(k).unwrap_or(&0) as f64);
            (x - y).powi(2) / (x + y)
        })
        .sum();
    let df = (keys.len() - 1).max(1) as f64;
    ChiSquared::new(df).unwrap().sf(stat)
}

/// Largest deviation from the law in binomial standard errors; hosts
/// missing from the law must never be observed.
pub fn worst_sigma<K: Ord>(counts: &BTreeMap<K, u64>, law: &BTreeMap<K, f64>, draws: u64) -> f64 {
    assert!(counts.keys().all(|k| law.contains_key(k)), "sampled a host of zero weight");
    law.iter()
        .map(|(k, &p)| {
            let c = *counts.get(k).unwrap_or(&0) as f64;
            let sd = (draws as f64 * p * (1.0 - p)).sqrt().max(1e-12);
            (c - draws as f64 * p).abs() / sd
        })
        .fold(0.0, f64::max)
}

/// Chi-square goodness of fit of observed counts against a law; returns
/// the p-value.
pub fn chi2_gof<K: Ord>(counts: &BTreeMap<K, u64>, law: &BTreeMap<K, f64>, draws: u64) -> f64 {
    let stat: f64 = law
        .iter()
        .map(|(k, &p)| {
            let e = draws as f64 * p;
            (*counts.get(k).unwrap_or(&0) as f64 - e).powi(2) / e
        })
        .sum();
    ChiSquared::new((law.len() - 1).max(1) as f64).unwrap().sf(stat)
}
