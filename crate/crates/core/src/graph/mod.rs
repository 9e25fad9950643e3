//! Graph and multigraph data model.
//!
//! Vertices are `0..n` in the Rust API. The canonical sequence form and the
//! JSON format use labels `1..=n`.

mod analysis;
mod canonical;
mod count;
mod iso;
mod pair;
pub mod shapes;
pub(crate) mod ugraph;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use analysis::{balance_class, density, essential_density, is_connected, BalanceClass};
pub use canonical::{aut_count, canonical_copies, strip_orientation_labels};
pub use count::{enumerate_copies, subgraph_count, subgraph_count_family};
pub use iso::{is_isomorphic, vertex_automorphisms};
pub use pair::pair_family;
pub(crate) use ugraph::{Adjacency, Dense};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    #[serde(rename = "multigraph", alias = "multi")]
    Multi,
    #[serde(rename = "simple")]
    Simple,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Multi => "multigraph",
            GraphKind::Simple => "simple",
        })
    }
}

impl std::str::FromStr for GraphKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multi" | "multigraph" => Ok(GraphKind::Multi),
            "simple" => Ok(GraphKind::Simple),
            _ => Err(Error::Config(format!("unknown graph kind {s:?}"))),
        }
    }
}

/// Vertex-labeled, edge-labeled, edge-oriented multigraph stored as its
/// canonical sequence. Edge `j` runs from `seq[2j]` to `seq[2j+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n: usize,
    seq: Vec<u32>,
}

impl Multigraph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let seq = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        Self::from_sequence(n, seq)
    }

    /// Builds from a 0-based sequence of even length.
    pub fn from_sequence(n: usize, seq: Vec<u32>) -> Result<Self> {
        if seq.len() % 2 != 0 {
            return Err(Error::InvalidGraph("odd sequence length".into()));
        }
        if let Some(&v) = seq.iter().find(|&&v| v as usize >= n) {
            return Err(Error::InvalidGraph(format!("vertex {v} out of range for n = {n}")));
        }
        Ok(Multigraph { n, seq })
    }

    pub fn empty(n: usize) -> Self {
        Multigraph { n, seq: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.seq.len() / 2
    }

    pub fn sequence(&self) -> &[u32] {
        &self.seq
    }

    /// The sequence with labels `1..=n`.
    pub fn canonical_sequence(&self) -> Vec<u32> {
        self.seq.iter().map(|v| v + 1).collect()
    }

    pub fn edge(&self, j: usize) -> (u32, u32) {
        (self.seq[2 * j], self.seq[2 * j + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.seq.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.n];
        for &v in &self.seq {
            d[v as usize] += 1;
        }
        d
    }

    pub fn loop_count(&self) -> usize {
        self.edges().filter(|(u, v)| u == v).count()
    }
}

/// Graph without loops or parallel edges. Edges are kept sorted with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::NotSimple);
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        let len = norm.len();
        norm.dedup();
        if norm.len() != len {
            return Err(Error::NotSimple);
        }
        Ok(SimpleGraph { n, edges: norm })
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph { n, edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u as usize] += 1;
            d[v as usize] += 1;
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Graph {
    Multi(Multigraph),
    Simple(SimpleGraph),
}

impl Graph {
    pub fn kind(&self) -> GraphKind {
        match self {
            Graph::Multi(_) => GraphKind::Multi,
            Graph::Simple(_) => GraphKind::Simple,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Graph::Multi(g) => g.n(),
            Graph::Simple(g) => g.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Graph::Multi(g) => g.m(),
            Graph::Simple(g) => g.m(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        match self {
            Graph::Multi(g) => g.degrees(),
            Graph::Simple(g) => g.degrees(),
        }
    }

    /// Endpoints of edge `j`; for simple graphs `j` indexes the sorted edge list.
    pub fn edge(&self, j: usize) -> (u32, u32) {
        match self {
            Graph::Multi(g) => g.edge(j),
            Graph::Simple(g) => g.edges[j],
        }
    }

    pub fn edge_list(&self) -> Vec<(u32, u32)> {
        match self {
            Graph::Multi(g) => g.edges().collect(),
            Graph::Simple(g) => g.edges.clone(),
        }
    }

    pub fn as_multi(&self) -> Option<&Multigraph> {
        match self {
            Graph::Multi(g) => Some(g),
            Graph::Simple(_) => None,
        }
    }

    pub fn as_simple(&self) -> Option<&SimpleGraph> {
        match self {
            Graph::Simple(g) => Some(g),
            Graph::Multi(_) => None,
        }
    }

    /// Builds a graph of the given kind from 0-based edges.
    pub fn from_edges(kind: GraphKind, n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        Ok(match kind {
            GraphKind::Multi => Graph::Multi(Multigraph::new(n, edges)?),
            GraphKind::Simple => Graph::Simple(SimpleGraph::new(n, edges)?),
        })
    }

    pub(crate) fn dense(&self) -> Dense {
        Dense::from_edges(self.n(), self.edge_list())
    }

    pub(crate) fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.n(), self.edge_list())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidGraph(e.to_string()))
    }
}

impl From<Multigraph> for Graph {
    fn from(g: Multigraph) -> Self {
        Graph::Multi(g)
    }
}

impl From<SimpleGraph> for Graph {
    fn from(g: SimpleGraph) -> Self {
        Graph::Simple(g)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    kind: GraphKind,
    n: usize,
    edges: Vec<[u32; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            kind: self.kind(),
            n: self.n(),
            edges: self.edge_list().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        let mut edges = Vec::with_capacity(j.edges.len());
        for [u, v] in j.edges {
            if u == 0 || v == 0 {
                return Err(serde::de::Error::custom("vertex labels start at 1"));
            }
            edges.push((u - 1, v - 1));
        }
        Graph::from_edges(j.kind, j.n, &edges).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// A subgraph of a host: a vertex set and a set of host edge indices
/// (edge labels for multigraphs, positions in the sorted edge list for
/// simple graphs). Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgraph {
    pub vertices: Vec<u32>,
    pub edges: Vec<u32>,
}
