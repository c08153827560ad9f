//! Maximum matching: blossom contraction for general graphs and the
//! augmenting-path method for bipartite ones (used as a cross-check and
//! for speed on bipartite instances).

use crate::error::{Error, Result};
use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// Maximum-cardinality matching as a mate vector.
pub fn blossom_max_matching(g: &Graph) -> Vec<Option<usize>> {
    let n = g.vertex_count();
    let mut state = Blossom {
        g,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        blossom: vec![false; n],
    };
    // Greedy seeding cuts the number of augmenting phases roughly in half.
    for &(u, v) in g.edges() {
        if state.mate[u] == NONE && state.mate[v] == NONE {
            state.mate[u] = v;
            state.mate[v] = u;
        }
    }
    for v in 0..n {
        if state.mate[v] == NONE {
            state.augment_from(v);
        }
    }
    state
        .mate
        .into_iter()
        .map(|m| if m == NONE { None } else { Some(m) })
        .collect()
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let n = self.g.vertex_count();
        let mut seen = vec![false; n];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, stem: usize, mut child: usize) {
        while self.base[v] != stem {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn augment_from(&mut self, root: usize) -> bool {
        let n = self.g.vertex_count();
        self.used = vec![false; n];
        self.parent = vec![NONE; n];
        self.base = (0..n).collect();
        self.used[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(to, _) in self.g.adjacency(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    // Odd cycle: contract the blossom found through v-to.
                    let stem = self.lca(v, to);
                    self.blossom = vec![false; n];
                    self.mark_path(v, stem, to);
                    self.mark_path(to, stem, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = stem;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        // Augmenting path: flip it.
                        let mut to = to;
                        while to != NONE {
                            let pv = self.parent[to];
                            let next = self.mate[pv];
                            self.mate[to] = pv;
                            self.mate[pv] = to;
                            to = next;
                        }
                        return true;
                    }
                    self.used[self.mate[to]] = true;
                    queue.push_back(self.mate[to]);
                }
            }
        }
        false
    }
}

/// Augmenting-path maximum matching for bipartite graphs, as a mate
/// vector.  Errors on non-bipartite input.
pub fn bipartite_max_matching(g: &Graph) -> Result<Vec<Option<usize>>> {
    let color = g.try_two_color().ok_or(Error::NotBipartite)?;
    let n = g.vertex_count();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if color[v] != 1 || mate[v] != NONE {
            continue;
        }
        let mut visited = vec![false; n];
        try_kuhn(g, v, &mut visited, &mut mate);
    }
    Ok(mate
        .into_iter()
        .map(|m| if m == NONE { None } else { Some(m) })
        .collect())
}

fn try_kuhn(g: &Graph, v: usize, visited: &mut [bool], mate: &mut [usize]) -> bool {
    for &(to, _) in g.adjacency(v) {
        if visited[to] {
            continue;
        }
        visited[to] = true;
        if mate[to] == NONE || try_kuhn(g, mate[to], visited, mate) {
            mate[to] = v;
            mate[v] = to;
            return true;
        }
    }
    false
}

/// Number of matched pairs in a mate vector.
pub fn matching_size(mate: &[Option<usize>]) -> usize {
    mate.iter().flatten().count() / 2
}

/// Edge indices of a mate vector's matching, sorted.
pub fn matching_edges(g: &Graph, mate: &[Option<usize>]) -> Vec<usize> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if let Some(u) = mate[v] {
            if v < u {
                out.push(g.edge_index(v, u).expect("mate along a non-edge"));
            }
        }
    }
    out
}
