//! Named pattern shapes.

use super::{Graph, GraphKind};
use crate::error::{Error, Result};

pub fn path(k: usize, kind: GraphKind) -> Graph {
    let edges: Vec<(u32, u32)> = (1..k as u32).map(|i| (i - 1, i)).collect();
    Graph::from_edges(kind, k, &edges).expect("path is valid")
}

/// The cycle with `k` vertices; `k = 1` is a loop and `k = 2` a double edge,
/// both multigraph only.
pub fn cycle(k: usize, kind: GraphKind) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidGraph("cycle length must be positive".into()));
    }
    let edges: Vec<(u32, u32)> = (0..k as u32).map(|i| (i, (i + 1) % k as u32)).collect();
    Graph::from_edges(kind, k, &edges)
}

/// The star `K_{1,k}` with centre 0.
pub fn star(k: usize, kind: GraphKind) -> Graph {
    let edges: Vec<(u32, u32)> = (1..=k as u32).map(|i| (0, i)).collect();
    Graph::from_edges(kind, k + 1, &edges).expect("star is valid")
}

pub fn complete(k: usize, kind: GraphKind) -> Graph {
    let mut edges = Vec::new();
    for u in 0..k as u32 {
        for v in u + 1..k as u32 {
            edges.push((u, v));
        }
    }
    Graph::from_edges(kind, k, &edges).expect("complete graph is valid")
}

/// Looks up a shape by name: `loop`, `edge`, `double-edge`, `triangle`,
/// `p<k>` (path on k vertices), `c<k>`, `k<k>`, `k1-<k>` or `star<k>`.
pub fn builtin(name: &str, kind: GraphKind) -> Result<Graph> {
    let bad = || Error::InvalidGraph(format!("unknown shape {name:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let name = name.to_ascii_lowercase();
    match name.as_str() {
        "loop" => cycle(1, kind),
        "edge" => Ok(path(2, kind)),
        "double-edge" => cycle(2, kind),
        "triangle" => cycle(3, kind),
        _ => {
            if let Some(k) = name.strip_prefix("k1-").or_else(|| name.strip_prefix("star")) {
                Ok(star(num(k)?, kind))
            } else if let Some(k) = name.strip_prefix('p') {
                Ok(path(num(k)?, kind))
            } else if let Some(k) = name.strip_prefix('c') {
                cycle(num(k)?, kind)
            } else if let Some(k) = name.strip_prefix('k') {
                Ok(complete(num(k)?, kind))
            } else {
                Err(bad())
            }
        }
    }
}

/// Parses either graph JSON or a builtin name.
pub fn parse_shape(s: &str, kind: GraphKind) -> Result<Graph> {
    let t = s.trim();
    if t.starts_with('{') {
        Graph::from_json(t)
    } else {
        builtin(t, kind)
    }
}
