//! Ground truth by exhaustive enumeration at tiny sizes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{enumerate_copies, subgraph_count_family, Graph, GraphKind, Multigraph, SimpleGraph};
use crate::series::{TruncatedSeries, Var, UNBOUNDED};
use crate::weights::WeightSpec;

const ENUMERATION_CAP: u128 = 100_000_000;
const MAX_COPIES: usize = 22;

/// Copy-count distribution over all hosts, optionally weighted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountDistribution {
    #[serde(serialize_with = "ser_rational")]
    pub total: BigRational,
    #[serde(serialize_with = "ser_rational_map")]
    pub by_t: BTreeMap<u64, BigRational>,
    #[serde(serialize_with = "ser_rational")]
    pub distinguished_total: BigRational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_rational_map<S: serde::Serializer>(
    m: &BTreeMap<u64, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

impl CountDistribution {
    fn empty() -> Self {
        CountDistribution { total: BigRational::zero(), by_t: BTreeMap::new(), distinguished_total: BigRational::zero() }
    }

    fn record(&mut self, t: u64, w: BigRational) {
        if w.is_zero() {
            return;
        }
        self.distinguished_total += &w * BigRational::from_integer(BigInt::from(t));
        self.total += &w;
        *self.by_t.entry(t).or_insert_with(BigRational::zero) += w;
    }

    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.distinguished_total += other.distinguished_total;
        for (t, w) in other.by_t {
            *self.by_t.entry(t).or_insert_with(BigRational::zero) += w;
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializes")
    }
}

fn multigraph_count(n: usize, m: usize) -> Result<u64> {
    let total = (n as u128).checked_pow(2 * m as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!("{n}^(2*{m}) multigraphs exceeds {ENUMERATION_CAP}")));
    }
    Ok(total as u64)
}

fn decode_multigraph(n: usize, m: usize, mut index: u64) -> Multigraph {
    let mut seq = vec![0u32; 2 * m];
    for slot in seq.iter_mut().rev() {
        *slot = (index % n as u64) as u32;
        index /= n as u64;
    }
    Multigraph::from_sequence(n, seq).expect("digits are in range")
}

/// Every canonical `(n, m)`-multigraph, each sequence exactly once.
pub fn enumerate_multigraphs(n: usize, m: usize) -> Result<impl Iterator<Item = Multigraph>> {
    let total = if n == 0 { u64::from(m == 0) } else { multigraph_count(n, m)? };
    Ok((0..total).map(move |i| if n == 0 { Multigraph::empty(0) } else { decode_multigraph(n, m, i) }))
}

fn binom_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Every simple graph on `n` vertices with `m` edges.
pub fn enumerate_simple(n: usize, m: usize) -> Result<impl Iterator<Item = SimpleGraph>> {
    let pairs: Vec<(u32, u32)> =
        (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
    let count = binom_u128(pairs.len() as u128, m as u128);
    if count > ENUMERATION_CAP {
        return Err(Error::CapExceeded(format!("{count} simple graphs exceeds {ENUMERATION_CAP}")));
    }
    let p = pairs.len();
    let mut idx: Option<Vec<usize>> = if m <= p { Some((0..m).collect()) } else { None };
    Ok(std::iter::from_fn(move || {
        let cur = idx.clone()?;
        let edges: Vec<(u32, u32)> = cur.iter().map(|&i| pairs[i]).collect();
        // advance to the next m-combination of 0..p
        let mut next = cur;
        let mut i = m;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if next[i] < p - m + i {
                next[i] += 1;
                for j in i + 1..m {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(SimpleGraph::new(n, &edges).expect("pairs are distinct"))
    }))
}

fn weight_table(delta: Option<&WeightSpec>, max_degree: usize) -> Result<Option<Vec<BigRational>>> {
    delta
        .map(|d| {
            (0..=max_degree)
                .map(|k| d.exact_delta(k).ok_or_else(|| Error::Domain("oracle needs rational weights".into())))
                .collect()
        })
        .transpose()
}

fn host_weight(table: &Option<Vec<BigRational>>, degrees: &[u32]) -> BigRational {
    match table {
        None => BigRational::one(),
        Some(t) => degrees.iter().map(|&d| t[d as usize].clone()).product(),
    }
}

/// Distribution of `G[family]` over every host, with weight
/// `prod_v delta_{deg v}` when `delta` is given.
pub fn oracle_distribution(
    n: usize,
    m: usize,
    family: &[Graph],
    delta: Option<&WeightSpec>,
    kind: GraphKind,
) -> Result<CountDistribution> {
    let table = weight_table(delta, 2 * m)?;
    let tally = |g: Graph| -> Result<(u64, BigRational)> {
        let w = host_weight(&table, &g.degrees());
        let t = if w.is_zero() { 0 } else { subgraph_count_family(&g, family)? as u64 };
        Ok((t, w))
    };
    let fold = |acc: Result<CountDistribution>, g: Graph| {
        let mut acc = acc?;
        let (t, w) = tally(g)?;
        acc.record(t, w);
        Ok(acc)
    };
    let reduce = |a: Result<CountDistribution>, b: Result<CountDistribution>| Ok(a?.merge(b?));
    match kind {
        GraphKind::Multi => {
            if n == 0 {
                let mut d = CountDistribution::empty();
                if m == 0 {
                    let (t, w) = tally(Graph::Multi(Multigraph::empty(0)))?;
                    d.record(t, w);
                }
                return Ok(d);
            }
            let total = multigraph_count(n, m)?;
            (0..total)
                .into_par_iter()
                .map(|i| Graph::Multi(decode_multigraph(n, m, i)))
                .fold(|| Ok(CountDistribution::empty()), fold)
                .reduce(|| Ok(CountDistribution::empty()), reduce)
        }
        GraphKind::Simple => enumerate_simple(n, m)?
            .map(Graph::Simple)
            .par_bridge()
            .fold(|| Ok(CountDistribution::empty()), fold)
            .reduce(|| Ok(CountDistribution::empty()), reduce),
    }
}

fn all_hosts(kind: GraphKind, n: usize, m: usize) -> Result<Vec<Graph>> {
    Ok(match kind {
        GraphKind::Multi => enumerate_multigraphs(n, m)?.map(Graph::Multi).collect(),
        GraphKind::Simple => enumerate_simple(n, m)?.map(Graph::Simple).collect(),
    })
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// Normalization of a canonical `(n, m)` object in the EGF.
pub(crate) fn egf_weight(kind: GraphKind, n: usize, m: usize) -> BigInt {
    match kind {
        GraphKind::Multi => factorial(n) * BigInt::from(2).pow(m as u32) * factorial(m),
        GraphKind::Simple => factorial(n),
    }
}

/// Patchwork generating function by definition: for every canonical host
/// with at most `n_max` vertices and `m_max` edges, every set of distinct
/// copies of `f` whose union is the whole host contributes `u^k` with the
/// EGF normalization. `k_max = None` keeps every piece count, so the series
/// is an exact polynomial in `u`. With `disjoint_only`, pieces must be
/// pairwise vertex-disjoint.
pub fn patchwork_series(
    f: &Graph,
    n_max: usize,
    m_max: usize,
    k_max: Option<usize>,
    kind: GraphKind,
    disjoint_only: bool,
) -> Result<TruncatedSeries> {
    if n_max > 6 || m_max > 6 {
        return Err(Error::CapExceeded("patchwork enumeration needs n_max, m_max <= 6".into()));
    }
    let u_cap = k_max.map_or(UNBOUNDED, |k| k as u32);
    let caps = [(Var::Z, n_max as u32), (Var::W, m_max as u32), (Var::U, u_cap)];
    let mut terms: Vec<(Vec<(Var, u32)>, BigRational)> = vec![(Vec::new(), BigRational::one())];
    for n in 1..=n_max {
        for m in 0..=m_max {
            let hosts = all_hosts(kind, n, m)?;
            let per_host: Vec<BTreeMap<usize, u64>> = hosts
                .par_iter()
                .map(|h| covering_sets(h, f, k_max, disjoint_only))
                .collect::<Result<_>>()?;
            let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
            for c in per_host {
                for (k, v) in c {
                    *counts.entry(k).or_default() += v;
                }
            }
            let norm = egf_weight(kind, n, m);
            for (k, c) in counts {
                let coef = BigRational::new(BigInt::from(c), norm.clone());
                terms.push((vec![(Var::Z, n as u32), (Var::W, m as u32), (Var::U, k as u32)], coef));
            }
        }
    }
    Ok(TruncatedSeries::from_terms(&caps, terms))
}

/// Number of copy sets covering `host`, by set size.
fn covering_sets(host: &Graph, f: &Graph, k_max: Option<usize>, disjoint_only: bool) -> Result<BTreeMap<usize, u64>> {
    let copies = enumerate_copies(host, f)?;
    if copies.len() > MAX_COPIES {
        return Err(Error::CapExceeded(format!("{} copies in one host", copies.len())));
    }
    let vmask: Vec<u32> = copies.iter().map(|c| c.vertices.iter().fold(0, |a, &v| a | 1 << v)).collect();
    let emask: Vec<u64> = copies.iter().map(|c| c.edges.iter().fold(0, |a, &e| a | 1 << e)).collect();
    let full_v: u32 = if host.n() == 32 { u32::MAX } else { (1u32 << host.n()) - 1 };
    let full_e: u64 = if host.m() == 64 { u64::MAX } else { (1u64 << host.m()) - 1 };
    let mut out = BTreeMap::new();
    for set in 1u32..(1u32 << copies.len()) {
        let k = set.count_ones() as usize;
        if k_max.is_some_and(|km| k > km) {
            continue;
        }
        let (mut v, mut e, mut overlap) = (0u32, 0u64, false);
        for i in 0..copies.len() {
            if set >> i & 1 == 1 {
                overlap |= v & vmask[i] != 0;
                v |= vmask[i];
                e |= emask[i];
            }
        }
        if v == full_v && e == full_e && !(disjoint_only && overlap) {
            *out.entry(k).or_default() += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::shapes;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_multigraphs(2, 1).unwrap().count(), 4);
        assert_eq!(enumerate_multigraphs(1, 2).unwrap().count(), 1);
        assert_eq!(enumerate_multigraphs(3, 2).unwrap().count(), 81);
        assert_eq!(enumerate_simple(3, 3).unwrap().count(), 1);
        assert_eq!(enumerate_simple(4, 2).unwrap().count(), 15);
        assert_eq!(enumerate_simple(3, 0).unwrap().count(), 1);
        assert_eq!(enumerate_simple(3, 4).unwrap().count(), 0);
        assert!(enumerate_multigraphs(10, 5).is_err());
    }

    #[test]
    fn oracle_examples() {
        let lp = shapes::builtin("loop", GraphKind::Multi).unwrap();
        let d = oracle_distribution(2, 1, &[lp], None, GraphKind::Multi).unwrap();
        assert_eq!(d.by_t, BTreeMap::from([(0, int(2)), (1, int(2))]));
        let edge = shapes::builtin("edge", GraphKind::Multi).unwrap();
        let d = oracle_distribution(2, 1, &[edge.clone()], None, GraphKind::Multi).unwrap();
        assert_eq!(d.distinguished_total, int(2));
        let d = oracle_distribution(2, 1, &[edge], Some(&WeightSpec::finite(&[1, 1])), GraphKind::Multi).unwrap();
        assert_eq!(d.total, int(2));
    }

    #[test]
    fn patchwork_examples() {
        let edge = shapes::builtin("edge", GraphKind::Multi).unwrap();
        let p = patchwork_series(&edge, 3, 2, None, GraphKind::Multi, false).unwrap();
        // canonical P3 hosts: 3 choices of centre, 2 edge orders, 2^2 orientations
        // = 24 sequences, each covered by exactly one 2-set of edges
        let want = BigRational::new(BigInt::from(24), egf_weight(GraphKind::Multi, 3, 2));
        assert_eq!(p.coeff(&[(Var::Z, 3), (Var::W, 2), (Var::U, 2)]), want);
        let c3 = shapes::builtin("triangle", GraphKind::Multi).unwrap();
        let p = patchwork_series(&c3, 3, 3, None, GraphKind::Multi, false).unwrap();
        assert!(p.coeff(&[(Var::Z, 3), (Var::W, 3), (Var::U, 2)]).is_zero());
        let one = BigRational::from_integer(BigInt::from(48)) / BigRational::from_integer(egf_weight(GraphKind::Multi, 3, 3));
        assert_eq!(p.coeff(&[(Var::Z, 3), (Var::W, 3), (Var::U, 1)]), one);
    }
}
