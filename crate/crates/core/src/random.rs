//! Random generation: uniform models, Boltzmann degree sampling, the
//! conditioned degree-weighted sampler and the configuration model.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};
use crate::special::zeta;
use crate::weights::{CoefficientSequence, WeightSpec};

/// Default cap on vertex-batch attempts of the rejection samplers.
pub const DEFAULT_RETRY_CAP: u64 = 10_000_000;

/// Generator for replicate `r` of a run seeded with `seed`.
pub fn replicate_rng(seed: u64, r: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r);
    rng
}

pub fn sample_uniform_multigraph<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Multigraph> {
    if n == 0 {
        return if m == 0 { Ok(Multigraph::empty(0)) } else { Err(Error::Domain("n must be positive".into())) };
    }
    let seq = (0..2 * m).map(|_| rng.random_range(0..n as u32)).collect();
    Multigraph::from_sequence(n, seq)
}

/// Vertex pair with index `k` in the order `(0,1), (0,2), (1,2), (0,3), ...`.
fn pair_from_index(k: u64) -> (u32, u32) {
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    ((k - v * (v - 1) / 2) as u32, v as u32)
}

/// Uniform `m`-subset of vertex pairs by a partial Fisher-Yates shuffle over
/// pair indices, with the displaced entries kept in a hash map.
pub fn sample_uniform_simple<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<SimpleGraph> {
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m as u64 > total {
        return Err(Error::Domain(format!("m = {m} exceeds {total} vertex pairs")));
    }
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(2 * m);
    let mut edges = Vec::with_capacity(m);
    for i in 0..m as u64 {
        let j = rng.random_range(i..total);
        let at_j = *swapped.get(&j).unwrap_or(&j);
        let at_i = *swapped.get(&i).unwrap_or(&i);
        swapped.insert(j, at_i);
        edges.push(pair_from_index(at_j));
    }
    SimpleGraph::new(n, &edges)
}

/// Root of `x Delta'(x)/Delta(x) = target` by bisection in `ln x`.
///
/// For a power law the map is capped by its value at the radius 1,
/// `zeta(beta-1)/zeta(beta)`; that target returns exactly 1.
pub fn solve_tuning(delta: &WeightSpec, target: f64) -> Result<f64> {
    delta.validate()?;
    if let WeightSpec::PowerLaw(beta) = delta {
        if *beta > 2.0 && target > 1.0 {
            let crit = zeta(beta - 1.0)? / zeta(*beta)?;
            if (target - crit).abs() <= 1e-12 * crit {
                return Ok(1.0);
            }
            if target > crit {
                return Err(Error::Tuning(format!("target {target} above the power-law maximum {crit}")));
            }
        }
    }
    solve_tuning_seq(delta, target)
}

/// Bisection in `ln x` on the increasing map `x f'(x)/f(x)` of any
/// nonnegative coefficient sequence, restricted to the disc of convergence.
pub fn solve_tuning_seq<S: CoefficientSequence + ?Sized>(s: &S, target: f64) -> Result<f64> {
    let lo = s.min_support() as f64;
    let hi = s.max_support().map_or(f64::INFINITY, |d| d as f64);
    if !(target > lo && target < hi) {
        return Err(Error::Tuning(format!("target {target} outside the open support interval ({lo}, {hi})")));
    }
    let mut a = -60.0f64;
    let mut b = if s.radius().is_finite() {
        s.radius().ln()
    } else {
        let mut b = 1.0f64;
        while s.psi(b.exp()) < target {
            b *= 2.0;
            if b > 64.0 {
                return Err(Error::Tuning("no upper bracket found".into()));
            }
        }
        b
    };
    for _ in 0..300 {
        let mid = 0.5 * (a + b);
        if s.psi(mid.exp()) < target {
            a = mid;
        } else {
            b = mid;
        }
        if b - a < 1e-14 {
            break;
        }
    }
    let x = (0.5 * (a + b)).exp();
    let got = s.psi(x);
    if (got - target).abs() > 1e-10 * target {
        return Err(Error::Tuning(format!("bisection stalled at x = {x}, psi = {got}")));
    }
    Ok(x)
}

/// Degrees above this use a continuous Pareto tail for heavy-tailed weights.
const TABLE_LIMIT: u64 = 100_000;
const TAIL_MASS: f64 = 1e-15;

/// A distribution on degrees with a cumulative table for inversion and, for
/// power laws, a Pareto tail beyond the table.
#[derive(Clone, Debug)]
pub struct DegreeDistribution {
    offset: u64,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    /// `guide[j]` is the first index with `cdf > j / GUIDE`.
    guide: Vec<u32>,
    tail: Option<(f64, f64)>,
}

const GUIDE: usize = 4096;

impl DegreeDistribution {
    /// `pi(d)` for `d = 0, 1, ...`.
    pub fn from_pmf(pmf: Vec<f64>) -> Result<Self> {
        let total: f64 = pmf.iter().sum();
        if pmf.iter().any(|p| !(*p >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("pmf must be nonnegative and sum to 1, sums to {total}")));
        }
        Ok(Self::build(0, pmf, None))
    }

    fn build(offset: u64, pmf: Vec<f64>, tail: Option<(f64, f64)>) -> Self {
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect::<Vec<f64>>();
        let guide = (0..=GUIDE)
            .map(|j| cdf.partition_point(|&c| c <= j as f64 / GUIDE as f64).min(cdf.len().saturating_sub(1)) as u32)
            .collect();
        DegreeDistribution { offset, pmf, cdf, guide, tail }
    }

    /// `pi_x(d) = delta_d x^d / (Delta(x) d!)`.
    pub fn boltzmann(delta: &WeightSpec, x: f64) -> Result<Self> {
        if !(x > 0.0) {
            if x == 0.0 && delta.is_positive(0) {
                return Ok(Self::build(0, vec![1.0], None));
            }
            return Err(Error::Domain(format!("tuning parameter must be positive, got {x}")));
        }
        if x > delta.radius() {
            return Err(Error::Domain(format!("x = {x} beyond the radius of convergence")));
        }
        let log_norm = delta.log_eval(0, x);
        let lx = x.ln();
        let start = delta.min_support();
        let end = delta.max_support();
        let mut pmf = Vec::new();
        let mut acc = 0.0;
        let mut d = start;
        loop {
            if end.is_some_and(|e| d > e) {
                break;
            }
            let l = delta.log_coef(d) + d as f64 * lx - log_norm;
            let p = if l.is_finite() { l.exp() } else { 0.0 };
            pmf.push(p);
            acc += p;
            d += 1;
            if end.is_none() && 1.0 - acc < TAIL_MASS && d as f64 > x {
                break;
            }
            if d - start >= TABLE_LIMIT {
                break;
            }
        }
        let tail = match delta {
            WeightSpec::PowerLaw(beta) if end.is_none() && 1.0 - acc > TAIL_MASS => {
                Some((start as f64 + pmf.len() as f64, beta - 1.0))
            }
            _ => None,
        };
        let remaining = 1.0 - acc;
        if tail.is_none() && remaining.abs() > 1e-9 {
            // renormalize: only rounding is left
            pmf.iter_mut().for_each(|p| *p /= acc);
        }
        Ok(Self::build(start, pmf, tail))
    }

    pub fn pmf(&self, d: u64) -> f64 {
        d.checked_sub(self.offset).and_then(|i| self.pmf.get(i as usize)).copied().unwrap_or(0.0)
    }

    /// Mean of the tabulated part plus the tail (zero if no tail).
    pub fn table_mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(i, p)| (self.offset + i as u64) as f64 * p).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let total = *self.cdf.last().unwrap_or(&1.0);
        if u >= total {
            if let Some((d0, alpha)) = self.tail {
                let v: f64 = rng.random();
                return (d0 * (1.0 - v).powf(-1.0 / alpha)).floor().min(u64::MAX as f64 / 4.0) as u64;
            }
            return self.offset + self.cdf.len() as u64 - 1;
        }
        let j = (u * GUIDE as f64) as usize;
        let (lo, hi) = (self.guide[j] as usize, self.guide[j + 1] as usize + 1);
        let i = lo + self.cdf[lo..hi.min(self.cdf.len())].partition_point(|&c| c <= u);
        self.offset + i.min(self.cdf.len() - 1) as u64
    }
}

/// One draw from `pi_x` (builds the table; use [`DegreeDistribution`] to
/// draw repeatedly).
pub fn boltzmann_degree<R: Rng + ?Sized>(delta: &WeightSpec, x: f64, rng: &mut R) -> Result<u64> {
    Ok(DegreeDistribution::boltzmann(delta, x)?.sample(rng))
}

/// Whether `total` is a sum of exactly `n` elements of `support`.
/// Exact by dynamic programming when cheap; otherwise uses the range and
/// gcd conditions, which are exact once `n` exceeds the largest support
/// element involved.
pub fn sum_feasible(support: &[u64], n: usize, total: u64) -> bool {
    let s: Vec<u64> = support.iter().copied().filter(|&d| d <= total).collect();
    if s.is_empty() {
        return n == 0 && total == 0;
    }
    if n == 0 {
        return total == 0;
    }
    let lo = *s.iter().min().expect("nonempty");
    let hi = *s.iter().max().expect("nonempty");
    if total < lo * n as u64 || total > hi * n as u64 {
        return false;
    }
    let cost = (n as u128) * (total as u128 + 1) * (s.len() as u128);
    if cost <= 50_000_000 {
        let width = total as usize + 1;
        let mut reach = vec![false; width];
        reach[0] = true;
        for _ in 0..n {
            let mut next = vec![false; width];
            for (v, &r) in reach.iter().enumerate() {
                if r {
                    for &d in &s {
                        let t = v + d as usize;
                        if t < width {
                            next[t] = true;
                        }
                    }
                }
            }
            reach = next;
        }
        return reach[total as usize];
    }
    let g = s.iter().fold(0u64, |g, &d| num_integer::gcd(g, d - lo));
    g == 0 || (total - lo * n as u64) % g == 0
}

/// Flop budget for the convolution tables of [`ConditionedDegrees`].
const CONV_BUDGET: f64 = 4e7;
const MAX_BLOCK: usize = 256;

/// `n` i.i.d. degrees from `pi` conditioned to sum to `total`.
///
/// The last `k` degrees are drawn exactly given what remains, from the
/// tables `P_j(s) = P(j draws sum to s)`; the first `n - k` are kept with
/// probability `P_k(r) / max P_k`. The product of these factors telescopes
/// to the conditioned law. `k` is as large as the table budget allows; with
/// `k = 0` this is plain rejection.
#[derive(Clone, Debug)]
pub struct ConditionedDegrees {
    n: usize,
    total: u64,
    dist: DegreeDistribution,
    /// `conv[j][s]` for `j <= k`, `s <= total`.
    conv: Vec<Vec<f64>>,
    /// Degrees with positive mass, at most `total`.
    support: Vec<u64>,
    pmax: f64,
}

impl ConditionedDegrees {
    pub fn new(n: usize, total: u64, dist: DegreeDistribution) -> Self {
        let width = total as usize + 1;
        let table_end = dist.offset + dist.pmf.len() as u64;
        let support: Vec<u64> = (dist.offset..table_end.min(total + 1)).filter(|&d| dist.pmf(d) > 0.0).collect();
        // the tables need every degree up to `total` tabulated
        let covered = dist.tail.is_none() || table_end > total;
        let step = width as f64 * support.len().max(1) as f64;
        let k = if covered { ((CONV_BUDGET / step) as usize).clamp(1, MAX_BLOCK).min(n) } else { 0 };
        let mut conv = vec![vec![0.0; width]];
        conv[0][0] = 1.0;
        for j in 1..=k {
            let prev = &conv[j - 1];
            let mut next = vec![0.0; width];
            for (s, &p) in prev.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for &d in &support {
                    let t = s + d as usize;
                    if t >= width {
                        break;
                    }
                    next[t] += p * dist.pmf(d);
                }
            }
            conv.push(next);
        }
        let pmax = conv[k].iter().copied().fold(0.0, f64::max);
        ConditionedDegrees { n, total, dist, conv, support, pmax }
    }

    /// Size of the exactly drawn block.
    pub fn block(&self) -> usize {
        self.conv.len() - 1
    }

    pub fn sample<R: Rng + ?Sized>(&self, retry_cap: u64, rng: &mut R) -> Result<Vec<u64>> {
        let k = self.block();
        let head = self.n - k;
        let mut degs = vec![0u64; self.n];
        'attempt: for _ in 0..retry_cap {
            let mut sum = 0u64;
            for d in degs[..head].iter_mut() {
                *d = self.dist.sample(rng);
                sum += *d;
                if sum > self.total {
                    continue 'attempt;
                }
            }
            let mut r = (self.total - sum) as usize;
            if k == 0 {
                if r == 0 {
                    return Ok(degs);
                }
                continue;
            }
            if self.pmax <= 0.0 || rng.random::<f64>() * self.pmax >= self.conv[k][r] {
                continue;
            }
            for j in (1..=k).rev() {
                let mut u = rng.random::<f64>() * self.conv[j][r];
                let mut pick = None;
                for &d in &self.support {
                    let d = d as usize;
                    if d > r {
                        break;
                    }
                    let w = self.dist.pmf(d as u64) * self.conv[j - 1][r - d];
                    if w > 0.0 {
                        pick = Some(d);
                        if u < w {
                            break;
                        }
                        u -= w;
                    }
                }
                let d = pick.expect("positive table entry has a positive term");
                degs[self.n - j] = d as u64;
                r -= d;
            }
            return Ok(degs);
        }
        Err(Error::Infeasible(format!("no degree sequence summing to {} after {retry_cap} attempts", self.total)))
    }
}

/// Conditioned degree-weighted sampler for `MG_{n,m,Delta}`: Boltzmann
/// degrees tuned to `2m/n`, rejected until they sum to `2m`, then a uniform
/// random arrangement of the half-edges.
#[derive(Clone, Debug)]
pub struct DeltaSampler {
    n: usize,
    m: usize,
    degrees: DegreeSource,
    pub retry_cap: u64,
}

#[derive(Clone, Debug)]
enum DegreeSource {
    /// Every vertex has this degree.
    Forced(u64),
    Boltzmann { x: f64, cond: ConditionedDegrees },
}

impl DeltaSampler {
    pub fn new(n: usize, m: usize, delta: &WeightSpec) -> Result<Self> {
        delta.validate()?;
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        let total = 2 * m as u64;
        let support: Vec<u64> = (0..=total).filter(|&d| delta.is_positive(d)).collect();
        if !sum_feasible(&support, n, total) {
            return Err(Error::Infeasible(format!("2m = {total} is not a sum of {n} supported degrees")));
        }
        let lo = delta.min_support();
        let hi = delta.max_support();
        let degrees = if total == lo * n as u64 {
            DegreeSource::Forced(lo)
        } else if hi.is_some_and(|h| total == h * n as u64) {
            DegreeSource::Forced(hi.expect("checked"))
        } else {
            let x = solve_tuning(delta, total as f64 / n as f64)?;
            DegreeSource::Boltzmann { x, cond: ConditionedDegrees::new(n, total, DegreeDistribution::boltzmann(delta, x)?) }
        };
        Ok(DeltaSampler { n, m, degrees, retry_cap: DEFAULT_RETRY_CAP })
    }

    /// The tuned `x`, when degrees are random.
    pub fn tuning(&self) -> Option<f64> {
        match &self.degrees {
            DegreeSource::Boltzmann { x, .. } => Some(*x),
            DegreeSource::Forced(_) => None,
        }
    }

    /// Degree sequence summing to `2m`.
    pub fn sample_degrees<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<u64>> {
        match &self.degrees {
            DegreeSource::Forced(d) => Ok(vec![*d; self.n]),
            DegreeSource::Boltzmann { cond, .. } => cond.sample(self.retry_cap, rng),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Multigraph> {
        let degs = self.sample_degrees(rng)?;
        let mut owners: Vec<u32> = Vec::with_capacity(2 * self.m);
        for (v, &d) in degs.iter().enumerate() {
            owners.extend(std::iter::repeat_n(v as u32, d as usize));
        }
        owners.shuffle(rng);
        Multigraph::from_sequence(self.n, owners)
    }
}

pub fn sample_delta_multigraph<R: Rng + ?Sized>(n: usize, m: usize, delta: &WeightSpec, rng: &mut R) -> Result<Multigraph> {
    DeltaSampler::new(n, m, delta)?.sample(rng)
}

/// Configuration model: `n` i.i.d. degrees from `pi` (redrawn until the sum
/// is even), then a uniform pairing of labelled half-edges, random edge
/// order and random orientation.
pub fn sample_configuration<R: Rng + ?Sized>(n: usize, pi: &DegreeDistribution, rng: &mut R) -> Result<Multigraph> {
    for _ in 0..DEFAULT_RETRY_CAP {
        let degs: Vec<u64> = (0..n).map(|_| pi.sample(rng)).collect();
        if degs.iter().sum::<u64>() % 2 == 0 {
            return Ok(pair_half_edges(n, &degs, rng));
        }
    }
    Err(Error::Infeasible("no even degree sum found".into()))
}

/// Configuration model conditioned on `m` edges. Builds the conditioning
/// tables on every call; hold a [`ConditionedDegrees`] and use
/// [`configuration_from_degrees`] to draw repeatedly.
pub fn sample_configuration_m<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    pi: &DegreeDistribution,
    retry_cap: u64,
    rng: &mut R,
) -> Result<Multigraph> {
    let degs = ConditionedDegrees::new(n, 2 * m as u64, pi.clone()).sample(retry_cap, rng)?;
    Ok(pair_half_edges(n, &degs, rng))
}

/// Uniform pairing of labelled half-edges for a fixed degree sequence with
/// even sum, random edge order and orientation.
pub fn configuration_from_degrees<R: Rng + ?Sized>(degs: &[u64], rng: &mut R) -> Result<Multigraph> {
    if degs.iter().sum::<u64>() % 2 != 0 {
        return Err(Error::Domain("degree sum must be even".into()));
    }
    Ok(pair_half_edges(degs.len(), degs, rng))
}

fn pair_half_edges<R: Rng + ?Sized>(n: usize, degs: &[u64], rng: &mut R) -> Multigraph {
    let mut half: Vec<u32> = Vec::new();
    for (v, &d) in degs.iter().enumerate() {
        half.extend(std::iter::repeat_n(v as u32, d as usize));
    }
    // Labelled half-edges: shuffle indices, not owners.
    let mut idx: Vec<usize> = (0..half.len()).collect();
    idx.shuffle(rng);
    let mut pairs: Vec<(u32, u32)> = idx.chunks_exact(2).map(|c| (half[c[0]], half[c[1]])).collect();
    pairs.shuffle(rng);
    let seq = pairs
        .into_iter()
        .flat_map(|(a, b)| if rng.random::<bool>() { [a, b] } else { [b, a] })
        .collect();
    Multigraph::from_sequence(n, seq).expect("owners are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_round_trip() {
        let mut k = 0;
        for v in 1..40u32 {
            for u in 0..v {
                assert_eq!(pair_from_index(k), (u, v));
                k += 1;
            }
        }
    }

    #[test]
    fn tuning_examples() {
        let x = solve_tuning(&WeightSpec::Exponential, 1.7).unwrap();
        assert!((x - 1.7).abs() < 1e-10);
        let x = solve_tuning(&WeightSpec::finite(&[1, 1]), 0.5).unwrap();
        assert!((x - 1.0).abs() < 1e-10);
        let crit = zeta(1.5).unwrap() / zeta(2.5).unwrap();
        assert_eq!(solve_tuning(&WeightSpec::PowerLaw(2.5), crit).unwrap(), 1.0);
        assert!(solve_tuning(&WeightSpec::PowerLaw(2.5), crit + 0.1).is_err());
        assert!(solve_tuning(&WeightSpec::finite(&[1, 1]), 1.0).is_err());
        assert!(solve_tuning(&WeightSpec::finite(&[1, 1]), 0.0).is_err());
    }

    #[test]
    fn feasibility() {
        assert!(sum_feasible(&[0, 2], 3, 4));
        assert!(!sum_feasible(&[0, 2], 3, 3));
        assert!(!sum_feasible(&[3, 5], 1, 4));
        assert!(sum_feasible(&[1], 2, 2));
    }

    #[test]
    fn degenerate_samplers() {
        let mut rng = replicate_rng(1, 0);
        let g = sample_uniform_multigraph(1, 3, &mut rng).unwrap();
        assert_eq!(g.loop_count(), 3);
        assert_eq!(sample_uniform_multigraph(5, 0, &mut rng).unwrap().m(), 0);
        let t = sample_uniform_simple(3, 3, &mut rng).unwrap();
        assert_eq!(t.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert!(sample_uniform_simple(3, 4, &mut rng).is_err());
        let k = sample_uniform_simple(6, 15, &mut rng).unwrap();
        assert_eq!(k.m(), 15);
        let zero = DegreeDistribution::from_pmf(vec![1.0]).unwrap();
        assert_eq!(sample_configuration(4, &zero, &mut rng).unwrap().m(), 0);
        let g = sample_delta_multigraph(2, 1, &WeightSpec::finite(&[1, 1]), &mut rng).unwrap();
        assert_eq!(g.loop_count(), 0);
        let regular = sample_delta_multigraph(4, 2, &WeightSpec::finite(&[0, 1]), &mut rng).unwrap();
        assert_eq!(regular.degrees(), vec![1; 4]);
        assert!(sample_delta_multigraph(3, 1, &WeightSpec::finite(&[0, 1]), &mut rng).is_err());
    }

    #[test]
    fn boltzmann_tables() {
        let d = DegreeDistribution::boltzmann(&WeightSpec::finite(&[1, 1]), 1.0).unwrap();
        assert!((d.pmf(0) - 0.5).abs() < 1e-12 && (d.pmf(1) - 0.5).abs() < 1e-12);
        let p = DegreeDistribution::boltzmann(&WeightSpec::Exponential, 2.0).unwrap();
        assert!((p.pmf(3) - (-2.0f64).exp() * 8.0 / 6.0).abs() < 1e-12);
        let pl = DegreeDistribution::boltzmann(&WeightSpec::PowerLaw(2.5), 1.0).unwrap();
        let z = zeta(2.5).unwrap();
        assert!((pl.pmf(1) - 1.0 / z).abs() < 1e-12);
        assert!((pl.pmf(10) - 10f64.powf(-2.5) / z).abs() < 1e-14);
    }
}
