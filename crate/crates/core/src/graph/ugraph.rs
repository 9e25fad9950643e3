/// Dense multiplicity matrix for small graphs; the diagonal holds loop counts.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub n: usize,
    pub mult: Vec<u32>,
}

impl Dense {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut mult = vec![0; n * n];
        for (u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            mult[u * n + v] += 1;
            if u != v {
                mult[v * n + u] += 1;
            }
        }
        Dense { n, mult }
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.mult[u * self.n + v]
    }

    pub fn degree(&self, v: usize) -> u32 {
        (0..self.n).map(|u| if u == v { 2 * self.get(v, v) } else { self.get(u, v) }).sum()
    }

    /// Pair classes `(u, v, k)` with `u <= v` and multiplicity `k > 0`.
    pub fn pairs(&self) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                let k = self.get(u, v);
                if k > 0 {
                    out.push((u, v, k));
                }
            }
        }
        out
    }
}

/// Sorted neighbour lists with multiplicities, for hosts of any size.
#[derive(Clone, Debug)]
pub(crate) struct Adjacency {
    pub n: usize,
    pub loops: Vec<u32>,
    pub adj: Vec<Vec<(u32, u32)>>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut loops = vec![0; n];
        let mut raw: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                loops[u as usize] += 1;
            } else {
                raw[u as usize].push(v);
                raw[v as usize].push(u);
            }
        }
        let adj = raw
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                let mut out: Vec<(u32, u32)> = Vec::new();
                for v in l {
                    match out.last_mut() {
                        Some((w, k)) if *w == v => *k += 1,
                        _ => out.push((v, 1)),
                    }
                }
                out
            })
            .collect();
        Adjacency { n, loops, adj }
    }

    #[inline]
    pub fn mult(&self, u: u32, v: u32) -> u32 {
        if u == v {
            return self.loops[u as usize];
        }
        let l = &self.adj[u as usize];
        match l.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => l[i].1,
            Err(_) => 0,
        }
    }
}
