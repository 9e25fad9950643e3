//! Summary statistics for replicate counts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Number of buckets used by [`median_of_means`].
pub const MOM_BUCKETS: usize = 16;

pub fn mean(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance; zero for a single replicate.
pub fn variance(xs: &[u64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    xs.iter().map(|&x| (x as f64 - mu).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Median of the means of contiguous buckets, in replicate order.
pub fn median_of_means(xs: &[u64], buckets: usize) -> f64 {
    let b = buckets.clamp(1, xs.len().max(1));
    let mut means: Vec<f64> = (0..b)
        .map(|i| mean(&xs[i * xs.len() / b..(i + 1) * xs.len() / b]))
        .collect();
    means.sort_by(f64::total_cmp);
    if b % 2 == 1 {
        means[b / 2]
    } else {
        (means[b / 2 - 1] + means[b / 2]) / 2.0
    }
}

pub fn empirical_pmf(xs: &[u64]) -> BTreeMap<u64, f64> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in xs {
        *counts.entry(x).or_default() += 1;
    }
    counts.into_iter().map(|(t, c)| (t, c as f64 / xs.len() as f64)).collect()
}

pub fn poisson_pmf(lambda: f64, t: u64) -> f64 {
    if lambda == 0.0 {
        return if t == 0 { 1.0 } else { 0.0 };
    }
    (t as f64 * lambda.ln() - lambda - crate::special::ln_factorial(t)).exp()
}

/// Poisson law on `0..=top`.
pub fn poisson_table(lambda: f64, top: u64) -> BTreeMap<u64, f64> {
    (0..=top).map(|t| (t, poisson_pmf(lambda, t))).collect()
}

/// `P(X > top)` for `X ~ Poisson(lambda)`, summed from above `top`.
pub fn poisson_tail(lambda: f64, top: u64) -> f64 {
    let mut t = top + 1;
    let mut term = poisson_pmf(lambda, t);
    let mut total = 0.0;
    loop {
        total += term;
        t += 1;
        term *= lambda / t as f64;
        if t as f64 > lambda && term < 1e-18 * total.max(1e-300) {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    total
}

/// Total variation distance between two pmfs on the nonnegative integers.
pub fn tv_distance(p: &BTreeMap<u64, f64>, q: &BTreeMap<u64, f64>) -> f64 {
    let mut keys: Vec<u64> = p.keys().chain(q.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let s: f64 = keys
        .iter()
        .map(|t| (p.get(t).copied().unwrap_or(0.0) - q.get(t).copied().unwrap_or(0.0)).abs())
        .sum();
    (s / 2.0).clamp(0.0, 1.0)
}

/// Total variation distance from `p` to Poisson(`lambda`). Mass of the
/// Poisson law past the support of `p` enters through its tail.
pub fn tv_to_poisson(p: &BTreeMap<u64, f64>, lambda: f64) -> f64 {
    let top = p.keys().next_back().copied().unwrap_or(0);
    let q = poisson_table(lambda, top);
    let head: f64 = (0..=top).map(|t| (p.get(&t).copied().unwrap_or(0.0) - q[&t]).abs()).sum();
    ((head + poisson_tail(lambda, top)) / 2.0).clamp(0.0, 1.0)
}

/// Least-squares slope of `ln mean` against `ln n`, with its standard error
/// when there are more than two points.
pub fn scaling_fit(ns: &[f64], means: &[f64]) -> Result<(f64, Option<f64>)> {
    if ns.len() != means.len() || ns.len() < 2 {
        return Err(Error::Domain("scaling fit needs at least two sizes".into()));
    }
    if means.iter().chain(ns).any(|&v| !(v > 0.0)) {
        return Err(Error::Domain("scaling fit is undefined for nonpositive values".into()));
    }
    let x: Vec<f64> = ns.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = means.iter().map(|v| v.ln()).collect();
    let k = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / k, y.iter().sum::<f64>() / k);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("scaling fit needs distinct sizes".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let se = (x.len() > 2).then(|| {
        let rss: f64 = x.iter().zip(&y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
        (rss / (k - 2.0) / sxx).sqrt()
    });
    Ok((slope, se))
}
