use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use subcount::census::*;
use subcount::graph::shapes::builtin;
use subcount::oracle::{enumerate_multigraphs, enumerate_simple, oracle_distribution};
use subcount::{Graph, GraphKind, WeightSpec};

fn int<T: Into<BigInt>>(v: T) -> BigRational {
    BigRational::from_integer(v.into())
}

fn shape(name: &str, kind: GraphKind) -> Graph {
    builtin(name, kind).unwrap()
}

fn fam(name: &str, kind: GraphKind) -> FamilySpec {
    FamilySpec::single(shape(name, kind)).unwrap()
}

#[test]
fn oracle_totals_match_closed_forms() {
    for n in 1..=3 {
        for m in 0..=3 {
            let d = oracle_distribution(n, m, &[shape("edge", GraphKind::Multi)], None, GraphKind::Multi).unwrap();
            assert_eq!(d.total, int(mg_total(n, m)));
        }
    }
    for n in 2..=5 {
        for m in 0..=4 {
            let d = oracle_distribution(n, m, &[shape("edge", GraphKind::Simple)], None, GraphKind::Simple).unwrap();
            assert_eq!(d.total, int(sg_total(n, m)));
        }
    }
}

#[test]
fn by_t_partitions_the_hosts() {
    for (n, m, name, kind) in [
        (3, 3, "p3", GraphKind::Multi),
        (3, 2, "double-edge", GraphKind::Multi),
        (4, 3, "p3", GraphKind::Simple),
        (5, 4, "c4", GraphKind::Simple),
    ] {
        let d = oracle_distribution(n, m, &[shape(name, kind)], None, kind).unwrap();
        let total: BigRational = d.by_t.values().sum();
        assert_eq!(total, d.total);
        let dist: BigRational = d.by_t.iter().map(|(&t, w)| w * int(t)).sum();
        assert_eq!(dist, d.distinguished_total);
    }
}

#[test]
fn distinguished_totals_match_oracle() {
    for name in ["loop", "edge", "double-edge", "p3", "triangle"] {
        let f = fam(name, GraphKind::Multi);
        for n in 1..=3 {
            for m in 0..=3 {
                let d = oracle_distribution(n, m, &f.shapes(), None, GraphKind::Multi).unwrap();
                assert_eq!(mg_distinguished(n, m, &f).unwrap(), d.distinguished_total, "{name} {n} {m}");
            }
        }
    }
    let both = FamilySpec::new(GraphKind::Simple, vec![shape("p3", GraphKind::Simple), shape("c4", GraphKind::Simple)]).unwrap();
    for (n, m) in [(4, 3), (4, 4), (5, 4)] {
        let d = oracle_distribution(n, m, &both.shapes(), None, GraphKind::Simple).unwrap();
        assert_eq!(sg_distinguished(n, m, &both).unwrap(), d.distinguished_total);
    }
}

#[test]
fn weighted_totals_are_power_coefficients() {
    for delta in [WeightSpec::finite(&[1, 1]), WeightSpec::finite(&[1, 1, 1]), WeightSpec::Cosh, WeightSpec::finite(&[0, 2, 3])] {
        for n in 1..=3 {
            for m in 0..=3 {
                let d = oracle_distribution(n, m, &[shape("edge", GraphKind::Multi)], Some(&delta), GraphKind::Multi).unwrap();
                assert_eq!(mg_weighted_total(n, m, &delta).unwrap(), d.total, "{delta} {n} {m}");
            }
        }
    }
}

#[test]
fn weighted_p3_matches_oracle_and_multivariate_route() {
    let p3 = fam("p3", GraphKind::Multi);
    for delta in [WeightSpec::finite(&[1, 1, 1]), WeightSpec::truncated_exp(3), WeightSpec::finite(&[2, 0, 1, 5])] {
        for (n, m) in [(2, 2), (3, 2), (3, 3)] {
            let d = oracle_distribution(n, m, &p3.shapes(), Some(&delta), GraphKind::Multi).unwrap();
            let fast = mg_distinguished_weighted(n, m, &delta, &p3).unwrap();
            assert_eq!(fast, d.distinguished_total);
            assert_eq!(mg_distinguished_weighted_multivariate(n, m, &delta, &p3).unwrap(), fast);
        }
    }
}

#[test]
fn exponential_weights_are_uniform() {
    let tri = fam("triangle", GraphKind::Multi);
    for (n, m) in [(3, 3), (4, 3), (5, 4)] {
        assert_eq!(
            expected_count(n, m, &tri, Some(&WeightSpec::Exponential)).unwrap(),
            expected_count(n, m, &tri, None).unwrap()
        );
    }
}

#[test]
fn exactly_t_matches_oracle() {
    for (name, kind, n, m) in [("edge", GraphKind::Multi, 3, 2), ("p3", GraphKind::Multi, 3, 3), ("p3", GraphKind::Simple, 4, 3)] {
        let f = shape(name, kind);
        let d = oracle_distribution(n, m, std::slice::from_ref(&f), None, kind).unwrap();
        let by_t: std::collections::BTreeMap<u64, BigRational> =
            exactly_t_distribution(n, m, &f, kind).unwrap().into_iter().filter(|(_, w)| !w.is_zero()).collect();
        assert_eq!(by_t, d.by_t);
    }
}

/// Loopless multigraphs without parallel edges are simple graphs with
/// ordered, oriented edges.
#[test]
fn multigraphs_to_graphs() {
    for n in 1..=4 {
        for m in 0..=3 {
            let clean = enumerate_multigraphs(n, m)
                .unwrap()
                .filter(|g| {
                    let mut e: Vec<(u32, u32)> = g.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
                    let len = e.len();
                    e.sort_unstable();
                    e.dedup();
                    e.len() == len && e.iter().all(|(u, v)| u != v)
                })
                .count();
            let simple = enumerate_simple(n, m).unwrap().count();
            assert_eq!(BigInt::from(simple), sg_total(n, m));
            let scale: u64 = (1..=m as u64).product::<u64>() << m;
            assert_eq!(clean as u64, scale * simple as u64, "{n} {m}");
        }
    }
}

/// Expected triangle count in the uniform multigraph drifts towards
/// `(2m/n)^3 / 6` as n grows with m = n.
#[test]
fn triangle_expectation_trend() {
    let tri = fam("triangle", GraphKind::Multi);
    let ratios: Vec<f64> = [6, 8, 10, 12]
        .iter()
        .map(|&n| {
            let e = expected_count(n, n, &tri, None).unwrap().to_f64().unwrap();
            e / (8.0 / 6.0)
        })
        .collect();
    assert!(ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs()), "{ratios:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_weights_match_oracle(d in prop::collection::vec(0i64..4, 1..4), n in 1usize..=3, m in 0usize..=2) {
        let delta = WeightSpec::finite(&d);
        let edge = fam("edge", GraphKind::Multi);
        let o = oracle_distribution(n, m, &edge.shapes(), Some(&delta), GraphKind::Multi).unwrap();
        prop_assert_eq!(mg_weighted_total(n, m, &delta).unwrap(), o.total);
        prop_assert_eq!(mg_distinguished_weighted(n, m, &delta, &edge).unwrap(), o.distinguished_total);
    }
}
