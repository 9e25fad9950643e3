use std::collections::HashSet;

use super::{vertex_automorphisms, Dense, Graph, Multigraph, SimpleGraph};
use crate::error::{Error, Result};

const MAX_N: usize = 6;
const MAX_M: usize = 6;

fn check_caps(f: &Graph) -> Result<()> {
    if f.n() > MAX_N || f.m() > MAX_M {
        return Err(Error::CapExceeded(format!(
            "orbit enumeration needs n <= {MAX_N} and m <= {MAX_M}, got ({}, {})",
            f.n(),
            f.m()
        )));
    }
    Ok(())
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Each permutation of `0..n`, in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Number of distinct images of the pair multiset under vertex permutations.
fn orbit_size(d: &Dense) -> u64 {
    let pairs = d.pairs();
    let mut seen = HashSet::new();
    for p in permutations(d.n) {
        let mut img: Vec<(usize, usize, u32)> = pairs
            .iter()
            .map(|&(u, v, k)| (p[u].min(p[v]), p[u].max(p[v]), k))
            .collect();
        img.sort_unstable();
        seen.insert(img);
    }
    seen.len() as u64
}

/// Number of canonical objects on the same support isomorphic to `f`.
///
/// Enumerates the vertex-permutation orbit of the pair multiset, then for
/// multigraphs multiplies by the ways to attach edge labels and orientations
/// to one multiset: `m! 2^(non-loops) / prod(mult!)`.
pub fn canonical_copies(f: &Graph) -> Result<u64> {
    check_caps(f)?;
    let d = f.dense();
    let orbit = orbit_size(&d);
    match f {
        Graph::Simple(_) => Ok(orbit),
        Graph::Multi(g) => {
            let non_loops = (g.m() - g.loop_count()) as u32;
            let denom: u64 = d.pairs().iter().map(|&(_, _, k)| factorial(k as usize)).product();
            Ok(orbit * factorial(g.m()) * 2u64.pow(non_loops) / denom)
        }
    }
}

/// Automorphism count. For multigraphs this is the stabilizer size in the
/// group of vertex relabelings, edge relabelings and non-loop flips:
/// `(vertex automorphisms) * prod(mult!) * 2^(loops)`.
pub fn aut_count(f: &Graph) -> Result<u64> {
    check_caps(f)?;
    let va = vertex_automorphisms(f);
    match f {
        Graph::Simple(_) => Ok(va),
        Graph::Multi(g) => {
            let d = f.dense();
            let mults: u64 = d.pairs().iter().map(|&(_, _, k)| factorial(k as usize)).product();
            Ok(va * mults * 2u64.pow(g.loop_count() as u32))
        }
    }
}

/// Forgets edge labels and orientations of a multigraph without loops or
/// parallel edges.
pub fn strip_orientation_labels(g: &Multigraph) -> Result<SimpleGraph> {
    let edges: Vec<(u32, u32)> = g.edges().collect();
    SimpleGraph::new(g.n(), &edges)
}
