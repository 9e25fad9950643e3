use super::{is_connected, is_isomorphic, Graph, GraphKind};
use crate::error::{Error, Result};

/// Isomorphism classes of unions of two distinct copies of `f` that share at
/// least one vertex.
///
/// The first copy is `f` itself. The second copy maps each vertex of `f`
/// either to an unused vertex of the first copy or to a fresh vertex, and
/// each of its edges is either identified with a not yet identified edge of
/// the first copy on the same endpoints, or added as a new edge. Simple
/// graphs must identify edges with equal endpoints.
pub fn pair_family(f: &Graph) -> Result<Vec<Graph>> {
    if f.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !is_connected(f) {
        return Err(Error::Disconnected);
    }
    let n = f.n();
    let edges = f.edge_list();
    let mut classes: Vec<Graph> = Vec::new();
    let mut map = vec![0u32; n];
    let mut used = vec![false; n];
    vertex_maps(0, n, 0, &mut map, &mut used, &mut |map, fresh| {
        let shared = map.iter().filter(|&&v| (v as usize) < n).count();
        if shared == 0 {
            return;
        }
        let images: Vec<(u32, u32)> = edges.iter().map(|&(u, v)| (map[u as usize], map[v as usize])).collect();
        let mut taken = vec![false; edges.len()];
        edge_choices(f.kind(), &edges, &images, 0, &mut taken, &mut Vec::new(), &mut |added, identified| {
            if shared == n && identified == edges.len() {
                return;
            }
            let mut all = edges.clone();
            all.extend_from_slice(added);
            let g = Graph::from_edges(f.kind(), n + fresh, &all).expect("union is well formed");
            if !classes.iter().any(|c| is_isomorphic(c, &g)) {
                classes.push(g);
            }
        });
    });
    Ok(classes)
}

fn vertex_maps(
    i: usize,
    n: usize,
    fresh: usize,
    map: &mut Vec<u32>,
    used: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[u32], usize),
) {
    if i == n {
        visit(map, fresh);
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            map[i] = v as u32;
            vertex_maps(i + 1, n, fresh, map, used, visit);
            used[v] = false;
        }
    }
    map[i] = (n + fresh) as u32;
    vertex_maps(i + 1, n, fresh + 1, map, used, visit);
}

fn same_pair(a: (u32, u32), b: (u32, u32)) -> bool {
    (a.0 == b.0 && a.1 == b.1) || (a.0 == b.1 && a.1 == b.0)
}

fn edge_choices(
    kind: GraphKind,
    first: &[(u32, u32)],
    images: &[(u32, u32)],
    j: usize,
    taken: &mut Vec<bool>,
    added: &mut Vec<(u32, u32)>,
    visit: &mut dyn FnMut(&[(u32, u32)], usize),
) {
    if j == images.len() {
        let identified = taken.iter().filter(|&&t| t).count();
        visit(added, identified);
        return;
    }
    let e = images[j];
    let mut matched_any = false;
    for (i, &g) in first.iter().enumerate() {
        if !taken[i] && same_pair(g, e) {
            matched_any = true;
            taken[i] = true;
            edge_choices(kind, first, images, j + 1, taken, added, visit);
            taken[i] = false;
            if kind == GraphKind::Simple {
                break;
            }
        }
    }
    if kind == GraphKind::Multi || !matched_any {
        added.push(e);
        edge_choices(kind, first, images, j + 1, taken, added, visit);
        added.pop();
    }
}
