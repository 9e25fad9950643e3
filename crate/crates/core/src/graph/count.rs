use std::collections::{BTreeSet, HashMap};

use super::iso::matching_order;
use super::{vertex_automorphisms, Dense, Graph, Subgraph};
use crate::error::{Error, Result};

const MAX_PATTERN_N: usize = 8;

/// Pattern compiled for backtracking: vertices in matching order, each with
/// its loop count and multiplicities towards earlier vertices.
struct Plan {
    order: Vec<usize>,
    loops: Vec<u32>,
    back: Vec<Vec<(usize, u32)>>,
    anchor: Vec<Option<usize>>,
}

impl Plan {
    fn new(p: &Dense) -> Self {
        let order = matching_order(p);
        let mut back = Vec::new();
        let mut anchor = Vec::new();
        let mut loops = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            let b: Vec<(usize, u32)> = (0..i)
                .filter_map(|j| {
                    let k = p.get(order[j], v);
                    (k > 0).then_some((j, k))
                })
                .collect();
            anchor.push(b.first().map(|&(j, _)| j));
            back.push(b);
            loops.push(p.get(v, v));
        }
        Plan { order, loops, back, anchor }
    }
}

fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn check_pattern(f: &Graph) -> Result<()> {
    if f.n() > MAX_PATTERN_N {
        return Err(Error::CapExceeded(format!("pattern has n > {MAX_PATTERN_N}")));
    }
    Ok(())
}

/// Walks all injective vertex maps compatible with the pattern's
/// multiplicities and reports each map (positions follow `plan.order`).
fn for_each_map(host: &super::Adjacency, plan: &Plan, mut visit: impl FnMut(&[u32])) {
    let k = plan.order.len();
    let mut image = vec![0u32; k];
    let mut used = vec![false; host.n];
    fn rec(
        host: &super::Adjacency,
        plan: &Plan,
        i: usize,
        image: &mut Vec<u32>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[u32]),
    ) {
        if i == plan.order.len() {
            visit(image);
            return;
        }
        let try_vertex = |c: u32, image: &mut Vec<u32>, used: &mut Vec<bool>, visit: &mut dyn FnMut(&[u32])| {
            if used[c as usize] || host.loops[c as usize] < plan.loops[i] {
                return;
            }
            if plan.back[i].iter().any(|&(j, m)| host.mult(image[j], c) < m) {
                return;
            }
            image[i] = c;
            used[c as usize] = true;
            rec(host, plan, i + 1, image, used, visit);
            used[c as usize] = false;
        };
        match plan.anchor[i] {
            Some(j) => {
                let nbrs: Vec<u32> = host.adj[image[j] as usize].iter().map(|&(v, _)| v).collect();
                for c in nbrs {
                    try_vertex(c, image, used, visit);
                }
            }
            None => {
                for c in 0..host.n as u32 {
                    try_vertex(c, image, used, visit);
                }
            }
        }
    }
    if k == 0 {
        visit(&image);
        return;
    }
    rec(host, plan, 0, &mut image, &mut used, &mut visit);
}

/// `G[F]`: number of subgraphs of `host` isomorphic to `pattern`.
///
/// Sums, over injective vertex maps, the number of ways to pick the required
/// parallel edges, then divides by the pattern's vertex automorphisms.
pub fn subgraph_count(host: &Graph, pattern: &Graph) -> Result<u128> {
    check_pattern(pattern)?;
    if pattern.n() > host.n() || pattern.m() > host.m() {
        return Ok(0);
    }
    let p = pattern.dense();
    let plan = Plan::new(&p);
    let h = host.adjacency();
    let mut total: u128 = 0;
    for_each_map(&h, &plan, |img| {
        let mut w: u128 = 1;
        for (i, &c) in img.iter().enumerate() {
            if plan.loops[i] > 0 {
                w *= binom(h.loops[c as usize], plan.loops[i]);
            }
            for &(j, m) in &plan.back[i] {
                w *= binom(h.mult(img[j], c), m);
            }
        }
        total += w;
    });
    Ok(total / vertex_automorphisms(pattern) as u128)
}

/// `G[F]` for a family of pairwise non-isomorphic shapes.
pub fn subgraph_count_family(host: &Graph, family: &[Graph]) -> Result<u128> {
    family.iter().map(|f| subgraph_count(host, f)).sum()
}

fn combinations(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Every subgraph of `host` isomorphic to `pattern`, explicitly. Meant for
/// small hosts.
pub fn enumerate_copies(host: &Graph, pattern: &Graph) -> Result<Vec<Subgraph>> {
    check_pattern(pattern)?;
    if pattern.n() > host.n() || pattern.m() > host.m() {
        return Ok(Vec::new());
    }
    let mut labels: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    for (j, (u, v)) in host.edge_list().into_iter().enumerate() {
        labels.entry((u.min(v), u.max(v))).or_default().push(j as u32);
    }
    let p = pattern.dense();
    let plan = Plan::new(&p);
    let classes: Vec<(usize, usize, u32)> = p.pairs();
    let pos: Vec<usize> = {
        let mut pos = vec![0; p.n];
        for (i, &v) in plan.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    };
    let h = host.adjacency();
    let mut found = BTreeSet::new();
    for_each_map(&h, &plan, |img| {
        let mut choices: Vec<Vec<Vec<u32>>> = Vec::new();
        for &(a, b, k) in &classes {
            let (x, y) = (img[pos[a]], img[pos[b]]);
            let l = labels.get(&(x.min(y), x.max(y))).map(Vec::as_slice).unwrap_or(&[]);
            choices.push(combinations(l, k as usize));
        }
        let mut vertices: Vec<u32> = img.to_vec();
        vertices.sort_unstable();
        let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
        for c in &choices {
            let mut next = Vec::new();
            for base in &acc {
                for pick in c {
                    let mut e = base.clone();
                    e.extend_from_slice(pick);
                    next.push(e);
                }
            }
            acc = next;
        }
        for mut edges in acc {
            edges.sort_unstable();
            found.insert(Subgraph { vertices: vertices.clone(), edges });
        }
    });
    Ok(found.into_iter().collect())
}
