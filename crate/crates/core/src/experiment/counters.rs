//! Copy counters for large sampled hosts.

use crate::error::Result;
use crate::graph::shapes::{builtin, cycle, star};
use crate::graph::ugraph::Adjacency;
use crate::graph::{is_isomorphic, subgraph_count, Graph};

/// Longest cycle handled by the DFS counter.
pub const MAX_FAST_CYCLE: usize = 8;

/// Counting strategy chosen once per pattern.
#[derive(Clone, Debug)]
pub enum Counter {
    Loops,
    Edges,
    /// Pairs of parallel non-loop edges.
    ParallelPairs,
    /// Cycles of the given length, at least 3.
    Cycles(usize),
    /// Stars with the given number of leaves, at least 2.
    Stars(usize),
    Generic(Graph),
}

impl Counter {
    pub fn for_pattern(f: &Graph) -> Result<Counter> {
        let kind = f.kind();
        let same = |g: Result<Graph>| g.map(|g| is_isomorphic(&g, f)).unwrap_or(false);
        if f.m() == 1 {
            if same(builtin("loop", kind)) {
                return Ok(Counter::Loops);
            }
            return Ok(Counter::Edges);
        }
        if same(builtin("double-edge", kind)) {
            return Ok(Counter::ParallelPairs);
        }
        if f.n() == f.m() && (3..=MAX_FAST_CYCLE).contains(&f.n()) && same(cycle(f.n(), kind)) {
            return Ok(Counter::Cycles(f.n()));
        }
        if f.n() == f.m() + 1 && f.m() >= 2 && same(Ok(star(f.m(), kind))) {
            return Ok(Counter::Stars(f.m()));
        }
        Ok(Counter::Generic(f.clone()))
    }

    pub fn count(&self, host: &Graph) -> Result<u64> {
        if let Counter::Generic(f) = self {
            return Ok(subgraph_count(host, f)? as u64);
        }
        let a = host.adjacency();
        Ok(match self {
            Counter::Loops => a.loops.iter().map(|&k| k as u64).sum(),
            Counter::Edges => a.adj.iter().flatten().map(|&(_, k)| k as u64).sum::<u64>() / 2,
            Counter::ParallelPairs => {
                a.adj.iter().flatten().map(|&(_, k)| k as u64 * (k as u64).saturating_sub(1) / 2).sum::<u64>() / 2
            }
            Counter::Cycles(l) => count_cycles(&a, *l),
            Counter::Stars(k) => count_stars(&a, *k),
            Counter::Generic(_) => unreachable!(),
        })
    }
}

/// Elementary symmetric polynomial `e_k` of the neighbour multiplicities,
/// summed over centres.
fn count_stars(a: &Adjacency, k: usize) -> u64 {
    let mut total = 0u64;
    let mut e = vec![0u64; k + 1];
    for l in &a.adj {
        if l.len() < k {
            continue;
        }
        e.iter_mut().for_each(|x| *x = 0);
        e[0] = 1;
        for &(_, w) in l {
            for j in (1..=k).rev() {
                e[j] += e[j - 1] * w as u64;
            }
        }
        total += e[k];
    }
    total
}

/// Cycles through distinct vertices, each weighted by the product of edge
/// multiplicities. Every cycle is rooted at its smallest vertex and found
/// once per direction.
fn count_cycles(a: &Adjacency, l: usize) -> u64 {
    let mut total = 0u64;
    let mut path = Vec::with_capacity(l);
    for s in 0..a.n as u32 {
        path.clear();
        path.push(s);
        total += extend(a, l, s, &mut path, 1);
    }
    total / 2
}

fn extend(a: &Adjacency, l: usize, s: u32, path: &mut Vec<u32>, weight: u64) -> u64 {
    let last = *path.last().unwrap();
    let mut total = 0;
    for &(v, k) in &a.adj[last as usize] {
        if v < s {
            continue;
        }
        if path.len() == l {
            if v == s {
                total += weight * k as u64;
            }
            continue;
        }
        if v == s || path.contains(&v) {
            continue;
        }
        path.push(v);
        total += extend(a, l, s, path, weight * k as u64);
        path.pop();
    }
    total
}
