use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use subcount::graph::shapes::{builtin, complete, cycle, path, star};
use subcount::graph::*;
use subcount::oracle::enumerate_multigraphs;

const M: GraphKind = GraphKind::Multi;
const S: GraphKind = GraphKind::Simple;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn mg(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::from_edges(M, n, edges).unwrap()
}

fn sg(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::from_edges(S, n, edges).unwrap()
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Counts isomorphic copies by trying every vertex subset and every edge
/// subset inside it.
fn naive_count(host: &Graph, f: &Graph) -> u64 {
    let (hn, k, e) = (host.n(), f.n(), f.m());
    let edges = host.edge_list();
    let mut total = 0;
    for vmask in 0u32..(1 << hn) {
        if vmask.count_ones() as usize != k {
            continue;
        }
        let verts: Vec<u32> = (0..hn as u32).filter(|v| vmask >> v & 1 == 1).collect();
        let inside: Vec<usize> = (0..edges.len())
            .filter(|&j| vmask >> edges[j].0 & 1 == 1 && vmask >> edges[j].1 & 1 == 1)
            .collect();
        for emask in 0u32..(1 << inside.len()) {
            if emask.count_ones() as usize != e {
                continue;
            }
            let local = |v: u32| verts.iter().position(|&w| w == v).unwrap() as u32;
            let sub: Vec<(u32, u32)> = (0..inside.len())
                .filter(|i| emask >> i & 1 == 1)
                .map(|i| (local(edges[inside[i]].0), local(edges[inside[i]].1)))
                .collect();
            if is_isomorphic(&Graph::from_edges(host.kind(), k, &sub).unwrap(), f) {
                total += 1;
            }
        }
    }
    total
}

/// Canonical multigraphs on the same support isomorphic to `f`, by
/// enumerating all `n^{2m}` sequences.
fn brute_copies(f: &Graph) -> u64 {
    enumerate_multigraphs(f.n(), f.m()).unwrap().filter(|g| is_isomorphic(&Graph::Multi(g.clone()), f)).count() as u64
}

fn small_shapes() -> Vec<Graph> {
    let mut v = vec![
        builtin("loop", M).unwrap(),
        builtin("edge", M).unwrap(),
        builtin("double-edge", M).unwrap(),
        mg(1, &[(0, 0), (0, 0)]),
        mg(2, &[(0, 0), (0, 1)]),
        mg(2, &[(0, 1), (1, 0), (0, 1)]),
        mg(3, &[(0, 1), (1, 2), (2, 2)]),
        mg(3, &[(0, 1), (0, 1), (1, 2)]),
        mg(4, &[(0, 1), (2, 3)]),
        mg(3, &[(0, 1)]),
        path(3, M),
        path(4, M),
        star(3, M),
        cycle(3, M).unwrap(),
        cycle(4, M).unwrap(),
    ];
    v.push(mg(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]));
    v
}

#[test]
fn density_examples() {
    assert_eq!(density(&cycle(3, M).unwrap()), q(1, 1));
    assert_eq!(density(&Graph::Multi(Multigraph::empty(0))), q(0, 1));
    assert_eq!(density(&complete(4, S)), q(3, 2));
}

#[test]
fn essential_density_examples() {
    let tail = sg(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
    let (d, w) = essential_density(&tail).unwrap();
    assert_eq!(d, q(1, 1));
    assert_eq!(w.vertices, vec![0, 1, 2]);
    let (d, w) = essential_density(&complete(4, S)).unwrap();
    assert_eq!((d, w.vertices.len()), (q(3, 2), 4));
    let (d, w) = essential_density(&sg(4, &[(0, 1), (2, 3)])).unwrap();
    assert_eq!((d, w.vertices.len()), (q(1, 2), 2));
    assert!(essential_density(&Graph::Simple(SimpleGraph::empty(0))).is_err());
}

#[test]
fn balance_examples() {
    assert_eq!(balance_class(&cycle(4, S).unwrap()).unwrap(), BalanceClass::StrictlyBalanced);
    let tail = sg(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
    assert_eq!(balance_class(&tail).unwrap(), BalanceClass::BarelyBalanced);
    let iso = sg(4, &[(0, 1), (1, 2), (0, 2)]);
    assert_eq!(balance_class(&iso).unwrap(), BalanceClass::Unbalanced);
    for f in [builtin("loop", M).unwrap(), builtin("double-edge", M).unwrap()]
        .into_iter()
        .chain((3..=5).map(|l| cycle(l, M).unwrap()))
        .chain([path(2, M), path(5, M), star(4, M)])
    {
        assert_eq!(balance_class(&f).unwrap(), BalanceClass::StrictlyBalanced, "{f}");
    }
}

#[test]
fn essential_density_dominates_density() {
    for f in small_shapes() {
        let (d, _) = essential_density(&f).unwrap();
        assert!(d >= density(&f));
        assert_eq!(d == density(&f), balance_class(&f).unwrap() != BalanceClass::Unbalanced, "{f}");
    }
}

#[test]
fn isomorphism_examples() {
    assert!(is_isomorphic(&mg(2, &[(0, 1)]), &mg(2, &[(1, 0)])));
    assert!(!is_isomorphic(&mg(1, &[(0, 0)]), &mg(2, &[(0, 1)])));
    assert!(is_isomorphic(&mg(3, &[(0, 1), (1, 2), (2, 0)]), &mg(3, &[(0, 2), (2, 1), (1, 0)])));
    assert!(!is_isomorphic(&path(3, M), &path(3, S)));
}

#[test]
fn canonical_copies_and_automorphisms() {
    assert_eq!(canonical_copies(&builtin("edge", M).unwrap()).unwrap(), 2);
    assert_eq!(canonical_copies(&builtin("loop", M).unwrap()).unwrap(), 1);
    assert_eq!(canonical_copies(&builtin("double-edge", M).unwrap()).unwrap(), 4);
    assert_eq!(aut_count(&cycle(3, M).unwrap()).unwrap(), 6);
    assert_eq!(aut_count(&builtin("double-edge", M).unwrap()).unwrap(), 4);
    assert_eq!(aut_count(&cycle(3, S).unwrap()).unwrap(), 6);
    assert_eq!(canonical_copies(&cycle(3, M).unwrap()).unwrap(), 48);
}

#[test]
fn orbit_stabilizer() {
    for f in small_shapes() {
        let (n, m) = (f.n(), f.m());
        let group = factorial(n) << m as u64;
        let group = group * factorial(m);
        let c = canonical_copies(&f).unwrap();
        assert_eq!(c * aut_count(&f).unwrap(), group, "{f}");
        assert_eq!(c, brute_copies(&f), "{f}");
    }
    for f in [path(3, S), cycle(4, S).unwrap(), star(3, S), sg(4, &[(0, 1), (2, 3)])] {
        assert_eq!(canonical_copies(&f).unwrap() * aut_count(&f).unwrap(), factorial(f.n()), "{f}");
    }
}

#[test]
fn size_caps_are_errors() {
    assert!(canonical_copies(&cycle(7, M).unwrap()).is_err());
    assert!(subgraph_count(&complete(9, S), &complete(9, S)).is_err());
}

#[test]
fn subgraph_count_examples() {
    assert_eq!(subgraph_count(&complete(4, S), &cycle(3, S).unwrap()).unwrap(), 4);
    assert_eq!(subgraph_count(&builtin("double-edge", M).unwrap(), &builtin("edge", M).unwrap()).unwrap(), 2);
    assert_eq!(subgraph_count(&cycle(5, S).unwrap(), &path(3, S)).unwrap(), 5);
    assert_eq!(enumerate_copies(&complete(4, S), &cycle(3, S).unwrap()).unwrap().len(), 4);
}

#[test]
fn subgraph_count_matches_naive_on_all_small_hosts() {
    let patterns = small_shapes();
    for (n, m) in [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3)] {
        for h in enumerate_multigraphs(n, m).unwrap().step_by(7) {
            let host = Graph::Multi(h);
            for f in patterns.iter().filter(|f| f.n() <= n && f.m() <= m) {
                assert_eq!(subgraph_count(&host, f).unwrap() as u64, naive_count(&host, f), "{f} in {host}");
            }
        }
    }
}

fn arb_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n as u32, 0..n as u32), 0..=max_m).prop_map(move |e| mg(n, &e))
    })
}

fn arb_simple(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v))).collect();
        prop::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |e| sg(n, &e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn naive_oracle_multigraph_hosts(host in arb_multigraph(4, 4), pick in 0usize..16) {
        let shapes = small_shapes();
        let f = &shapes[pick % shapes.len()];
        prop_assert_eq!(subgraph_count(&host, f).unwrap() as u64, naive_count(&host, f));
    }

    #[test]
    fn naive_oracle_simple_hosts(host in arb_simple(5)) {
        for f in [path(3, S), cycle(3, S).unwrap(), cycle(4, S).unwrap(), star(3, S), sg(2, &[(0, 1)])] {
            prop_assert_eq!(subgraph_count(&host, &f).unwrap() as u64, naive_count(&host, &f));
        }
    }

    #[test]
    fn relabeling_preserves_isomorphism(g in arb_multigraph(5, 5), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut edges: Vec<(u32, u32)> = g.edge_list().iter().map(|&(u, v)| (perm[v as usize], perm[u as usize])).collect();
        edges.reverse();
        let h = mg(n, &edges);
        prop_assert!(is_isomorphic(&g, &h));
        prop_assert_eq!(vertex_automorphisms(&g), vertex_automorphisms(&h));
    }
}

#[test]
fn pair_family_examples() {
    let pairs = pair_family(&builtin("edge", M).unwrap()).unwrap();
    assert_eq!(pairs.len(), 2);
    assert!(pairs.iter().any(|g| is_isomorphic(g, &path(3, M))));
    assert!(pairs.iter().any(|g| is_isomorphic(g, &builtin("double-edge", M).unwrap())));
    assert!(pair_family(&mg(4, &[(0, 1), (2, 3)])).is_err());
}

#[test]
fn pair_family_is_denser() {
    for f in [
        cycle(3, M).unwrap(),
        cycle(4, M).unwrap(),
        cycle(5, M).unwrap(),
        builtin("double-edge", M).unwrap(),
        builtin("loop", M).unwrap(),
        complete(4, S),
        cycle(4, S).unwrap(),
    ] {
        let d = density(&f);
        let pairs = pair_family(&f).unwrap();
        assert!(!pairs.is_empty());
        for p in pairs {
            assert!(density(&p) > d, "{p} from {f}");
        }
    }
}

#[test]
fn strip_orientation_examples() {
    let e = Multigraph::new(2, &[(0, 1)]).unwrap();
    assert_eq!(strip_orientation_labels(&e).unwrap().edges(), &[(0, 1)]);
    let c = Multigraph::new(3, &[(0, 1), (2, 1), (2, 0)]).unwrap();
    assert!(is_isomorphic(&Graph::Simple(strip_orientation_labels(&c).unwrap()), &cycle(3, S).unwrap()));
    assert!(strip_orientation_labels(&Multigraph::new(2, &[(0, 1), (1, 0)]).unwrap()).is_err());
    assert!(strip_orientation_labels(&Multigraph::new(1, &[(0, 0)]).unwrap()).is_err());
}

#[test]
fn json_round_trip() {
    let g = Graph::from_json(r#"{"kind":"multigraph","n":3,"edges":[[1,2],[2,3],[3,1]]}"#).unwrap();
    assert!(is_isomorphic(&g, &cycle(3, M).unwrap()));
    assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    let s = Graph::from_json(r#"{"kind":"simple","n":3,"edges":[[1,2],[2,3],[1,3]]}"#).unwrap();
    assert_eq!(s.kind(), S);
    assert!(Graph::from_json(r#"{"kind":"simple","n":2,"edges":[[1,1]]}"#).is_err());
    assert!(Graph::from_json(r#"{"kind":"multigraph","n":2,"edges":[[1,3]]}"#).is_err());
}
