use super::{Dense, Graph};

/// Isomorphism in the sense of the quiver model: vertex relabeling, edge
/// relabeling and per-edge orientation flips. This makes two multigraphs
/// isomorphic iff their multisets of unordered vertex pairs correspond under
/// a vertex bijection. Graphs of different kinds are never isomorphic.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.kind() != h.kind() || g.n() != h.n() || g.m() != h.m() {
        return false;
    }
    count_isomorphisms(&g.dense(), &h.dense(), true) > 0
}

/// Number of vertex permutations that map the pair multiset of `g` onto itself.
pub fn vertex_automorphisms(g: &Graph) -> u64 {
    let d = g.dense();
    count_isomorphisms(&d, &d, false)
}

fn signature(d: &Dense) -> Vec<(u32, u32)> {
    (0..d.n).map(|v| (d.degree(v), d.get(v, v))).collect()
}

/// Order in which pattern vertices are matched: each next vertex is the one
/// with most already-placed neighbours, ties broken by degree.
pub(crate) fn matching_order(d: &Dense) -> Vec<usize> {
    let n = d.n;
    let deg: Vec<u32> = (0..n).map(|v| d.degree(v)).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| d.get(u, v) > 0).count();
                (links, deg[v], std::cmp::Reverse(v))
            })
            .expect("unplaced vertex remains");
        placed[best] = true;
        order.push(best);
    }
    order
}

pub(crate) fn count_isomorphisms(a: &Dense, b: &Dense, first_only: bool) -> u64 {
    if a.n != b.n {
        return 0;
    }
    let (sa, sb) = (signature(a), signature(b));
    let mut x = sa.clone();
    let mut y = sb.clone();
    x.sort_unstable();
    y.sort_unstable();
    if x != y {
        return 0;
    }
    let order = matching_order(a);
    let mut image = vec![usize::MAX; a.n];
    let mut used = vec![false; a.n];
    let mut count = 0;
    search(a, b, &sa, &sb, &order, 0, &mut image, &mut used, &mut count, first_only);
    count
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Dense,
    b: &Dense,
    sa: &[(u32, u32)],
    sb: &[(u32, u32)],
    order: &[usize],
    i: usize,
    image: &mut [usize],
    used: &mut [bool],
    count: &mut u64,
    first_only: bool,
) -> bool {
    if i == order.len() {
        *count += 1;
        return first_only;
    }
    let v = order[i];
    for c in 0..b.n {
        if used[c] || sb[c] != sa[v] {
            continue;
        }
        let ok = order[..i].iter().all(|&u| a.get(u, v) == b.get(image[u], c));
        if !ok {
            continue;
        }
        image[v] = c;
        used[c] = true;
        let stop = search(a, b, sa, sb, order, i + 1, image, used, count, first_only);
        used[c] = false;
        if stop {
            return true;
        }
    }
    false
}
