use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Graph, Subgraph};
use crate::error::{Error, Result};

const MAX_SUBSET_N: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BalanceClass {
    StrictlyBalanced,
    BarelyBalanced,
    Unbalanced,
}

fn ratio(a: usize, b: usize) -> BigRational {
    if b == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `m / n`, with the empty graph at 0.
pub fn density(g: &Graph) -> BigRational {
    ratio(g.m(), g.n())
}

fn check_subset_cap(g: &Graph) -> Result<()> {
    if g.n() > MAX_SUBSET_N {
        return Err(Error::CapExceeded(format!("subset search needs n <= {MAX_SUBSET_N}")));
    }
    Ok(())
}

/// Induced edge counts for every vertex subset mask.
fn induced_counts(g: &Graph) -> Vec<u32> {
    let n = g.n();
    let edges: Vec<u32> = g.edge_list().iter().map(|&(u, v)| (1u32 << u) | (1u32 << v)).collect();
    (0u32..(1u32 << n))
        .map(|mask| edges.iter().filter(|&&e| e & mask == e).count() as u32)
        .collect()
}

/// Maximum density over non-empty vertex subsets with all induced edges.
/// Ties go to the smallest subset, then the lowest mask.
pub fn essential_density(g: &Graph) -> Result<(BigRational, Subgraph)> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_subset_cap(g)?;
    let counts = induced_counts(g);
    let mut masks: Vec<u32> = (1u32..(1u32 << g.n())).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut best: Option<(BigRational, u32)> = None;
    for mask in masks {
        let d = ratio(counts[mask as usize] as usize, mask.count_ones() as usize);
        if best.as_ref().map_or(true, |(b, _)| d > *b) {
            best = Some((d, mask));
        }
    }
    let (d, mask) = best.expect("n >= 1");
    let vertices: Vec<u32> = (0..g.n() as u32).filter(|v| mask >> v & 1 == 1).collect();
    let edges: Vec<u32> = g
        .edge_list()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| mask >> u & 1 == 1 && mask >> v & 1 == 1)
        .map(|(j, _)| j as u32)
        .collect();
    Ok((d, Subgraph { vertices, edges }))
}

/// Classifies by comparing the density against every strict subgraph.
/// The densest strict subgraphs are either induced on a proper vertex subset
/// or the whole vertex set minus one edge; the empty graph has density 0.
pub fn balance_class(g: &Graph) -> Result<BalanceClass> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    check_subset_cap(g)?;
    let n = g.n();
    let full = (1u32 << n) - 1;
    let counts = induced_counts(g);
    let mut strict = BigRational::zero();
    for mask in 1..full {
        let d = ratio(counts[mask as usize] as usize, mask.count_ones() as usize);
        if d > strict {
            strict = d;
        }
    }
    if g.m() > 0 {
        let d = ratio(g.m() - 1, n);
        if d > strict {
            strict = d;
        }
    }
    let d = density(g);
    Ok(if d > strict {
        BalanceClass::StrictlyBalanced
    } else if d == strict {
        BalanceClass::BarelyBalanced
    } else {
        BalanceClass::Unbalanced
    })
}

pub fn is_connected(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let adj = g.adjacency();
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in &adj.adj[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
