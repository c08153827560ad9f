//! Simple undirected graphs with dense vertex indices and stable edge
//! indices, plus the structural subroutines every flow construction rests
//! on: bipartiteness, odd cycles, bridges, spanning trees, Euler circuits,
//! the bipartite double cover and an exact independence number.

use crate::error::{Error, Result};

/// Immutable simple undirected graph.  Vertices are `0..n`, edges are
/// unordered pairs stored as `(u, v)` with `u < v`; edge indices are stable
/// for the lifetime of the object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

/// Two-coloring of a bipartite graph; side labels are 1 and 2, vertex 0 is
/// always on side 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<u8>,
    pub size1: usize,
    pub size2: usize,
}

impl Bipartition {
    pub fn is_balanced(&self) -> bool {
        self.size1 == self.size2
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Graph> {
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen = std::collections::HashSet::new();
        let mut adj = vec![Vec::new(); n];
        for (idx, &(a, b)) in edge_list.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::BadParameter(format!(
                    "edge {{{a},{b}}} out of range for n={n}"
                )));
            }
            if a == b {
                return Err(Error::BadParameter(format!("loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::BadParameter(format!(
                    "parallel edge {{{},{}}}",
                    e.0, e.1
                )));
            }
            edges.push(e);
            adj[a].push((b, idx));
            adj[b].push((a, idx));
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs, in insertion order.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// The endpoint of edge `e` other than `v`.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].iter().any(|&(w, _)| w == v)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    /// Component id per vertex, ids assigned in order of lowest contained
    /// vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = next;
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |&c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_count() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() == self.n.saturating_sub(1)
    }

    pub fn is_unicyclic(&self) -> bool {
        self.is_connected() && self.edges.len() == self.n
    }

    /// Common degree if the graph is regular.
    pub fn regularity(&self) -> Option<usize> {
        let d = self.degree(0);
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Restriction to an edge subset, keeping all vertices.  The returned
    /// map sends new edge indices back to indices in `self`.
    pub fn edge_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let list: Vec<_> = keep.iter().map(|&e| self.edges[e]).collect();
        let g = Graph::new(self.n, &list).expect("subgraph of a simple graph is simple");
        (g, keep.to_vec())
    }

    /// Deletes a vertex set; returns the graph on the remaining vertices and
    /// the map from new vertex indices to old ones.
    pub fn delete_vertices(&self, remove: &[usize]) -> (Graph, Vec<usize>) {
        let mut gone = vec![false; self.n];
        for &v in remove {
            gone[v] = true;
        }
        let mut old_of = Vec::new();
        let mut new_of = vec![usize::MAX; self.n];
        for v in 0..self.n {
            if !gone[v] {
                new_of[v] = old_of.len();
                old_of.push(v);
            }
        }
        let list: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(a, b)| !gone[a] && !gone[b])
            .map(|&(a, b)| (new_of[a], new_of[b]))
            .collect();
        let g = Graph::new(old_of.len(), &list).expect("vertex-deleted subgraph is simple");
        (g, old_of)
    }

    /// Deterministic 2-coloring, or `None` when an odd cycle exists.
    pub fn bipartition(&self) -> Result<Option<Bipartition>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        match self.try_two_color() {
            Some(side) => {
                let size1 = side.iter().filter(|&&s| s == 1).count();
                let size2 = self.n - size1;
                Ok(Some(Bipartition { side, size1, size2 }))
            }
            None => Ok(None),
        }
    }

    /// Two-coloring that works componentwise (no connectivity requirement).
    pub fn try_two_color(&self) -> Option<Vec<u8>> {
        let mut side = vec![0u8; self.n];
        for s in 0..self.n {
            if side[s] != 0 {
                continue;
            }
            side[s] = 1;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adj[v] {
                    if side[w] == 0 {
                        side[w] = 3 - side[v];
                        queue.push_back(w);
                    } else if side[w] == side[v] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.try_two_color().is_some()
    }

    /// A simple odd cycle as an edge sequence, or `None` when bipartite.
    pub fn find_odd_cycle(&self) -> Result<Option<Vec<usize>>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if self.n == 0 {
            return Ok(None);
        }
        // BFS tree from vertex 0; the first same-color non-tree edge closes
        // an odd cycle through the lowest common ancestor.
        let mut depth = vec![usize::MAX; self.n];
        let mut parent_edge = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        depth[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut order = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, e) in &self.adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    parent_edge[w] = e;
                    queue.push_back(w);
                }
            }
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if parent_edge[a] == e || parent_edge[b] == e {
                continue;
            }
            if (depth[a] + depth[b]) % 2 == 0 {
                // Same parity: tree paths to the LCA plus this edge form an
                // odd cycle.
                let (mut x, mut y) = (a, b);
                let mut ex = Vec::new();
                let mut ey = Vec::new();
                while depth[x] > depth[y] {
                    ex.push(parent_edge[x]);
                    x = parent[x];
                }
                while depth[y] > depth[x] {
                    ey.push(parent_edge[y]);
                    y = parent[y];
                }
                while x != y {
                    ex.push(parent_edge[x]);
                    x = parent[x];
                    ey.push(parent_edge[y]);
                    y = parent[y];
                }
                ey.reverse();
                let mut cycle = vec![e];
                cycle.extend(ex);
                cycle.extend(ey);
                debug_assert!(cycle.len() % 2 == 1);
                return Ok(Some(cycle));
            }
        }
        Ok(None)
    }

    /// Cut edges, by lowpoint DFS.
    pub fn bridges(&self) -> Vec<usize> {
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        let mut timer = 0usize;
        // Iterative DFS; frames are (vertex, incoming edge, adjacency cursor).
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, in_edge, ref mut cursor)) = stack.last_mut() {
                if *cursor < self.adj[v].len() {
                    let (w, e) = self.adj[v][*cursor];
                    *cursor += 1;
                    if e == in_edge {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] > disc[u] {
                            out.push(in_edge);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Edge set of the deterministic DFS spanning tree (lowest-index
    /// tie-break).
    pub fn spanning_tree(&self) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.spanning_forest())
    }

    /// Spanning forest edge set (works on disconnected graphs).
    pub fn spanning_forest(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut tree = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![(root, 0usize)];
            while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
                if *cursor < self.adj[v].len() {
                    let (w, e) = self.adj[v][*cursor];
                    *cursor += 1;
                    if !seen[w] {
                        seen[w] = true;
                        tree.push(e);
                        stack.push((w, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
        tree.sort_unstable();
        tree
    }

    /// Closed walk using every edge exactly once (Hierholzer).
    pub fn euler_circuit(&self) -> Result<Vec<usize>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        if let Some(v) = (0..self.n).find(|&v| self.degree(v) % 2 == 1) {
            return Err(Error::OddDegree(v));
        }
        if self.edges.is_empty() {
            return Ok(Vec::new());
        }
        let start = (0..self.n).find(|&v| self.degree(v) > 0).unwrap();
        let mut used = vec![false; self.edges.len()];
        let mut cursor = vec![0usize; self.n];
        let mut stack = vec![start];
        let mut vertex_path = Vec::new();
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while cursor[v] < self.adj[v].len() {
                let (w, e) = self.adj[v][cursor[v]];
                cursor[v] += 1;
                if !used[e] {
                    used[e] = true;
                    stack.push(w);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                vertex_path.push(v);
                stack.pop();
            }
        }
        vertex_path.reverse();
        let mut circuit = Vec::with_capacity(self.edges.len());
        let mut remaining = vec![false; self.edges.len()];
        // Map consecutive vertex pairs back to edge indices, consuming
        // multiplicity-one edges.
        for e in 0..self.edges.len() {
            remaining[e] = true;
        }
        for pair in vertex_path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let e = self.adj[a]
                .iter()
                .find(|&&(w, e)| w == b && remaining[e])
                .map(|&(_, e)| e)
                .ok_or_else(|| Error::Internal("euler walk reconstruction failed".into()))?;
            remaining[e] = false;
            circuit.push(e);
        }
        Ok(circuit)
    }

    /// Bipartite double cover on `2n` vertices (`x_i = i`, `y_i = n + i`).
    /// Each edge `{i,j}` lifts to `{x_i, y_j}` and `{x_j, y_i}`; the second
    /// return value maps each original edge to its pair of cover edges.
    pub fn bipartite_double_cover(&self) -> (Graph, Vec<(usize, usize)>) {
        let mut list = Vec::with_capacity(2 * self.edges.len());
        let mut back = Vec::with_capacity(self.edges.len());
        for &(i, j) in &self.edges {
            let e1 = list.len();
            list.push((i, self.n + j));
            let e2 = list.len();
            list.push((j, self.n + i));
            back.push((e1, e2));
        }
        let cover = Graph::new(2 * self.n, &list).expect("double cover is simple");
        (cover, back)
    }

    /// Exact independence number by branch and bound.
    pub fn independence_number(&self, cap: usize) -> Result<usize> {
        if self.n > cap {
            return Err(Error::CapExceeded(format!(
                "independence number search capped at {cap} vertices, graph has {}",
                self.n
            )));
        }
        let nbr: Vec<u64> = (0..self.n)
            .map(|v| self.adj[v].iter().fold(0u64, |m, &(w, _)| m | (1 << w)))
            .collect();
        fn go(free: u64, nbr: &[u64], best: &mut usize, size: usize) {
            if size + free.count_ones() as usize <= *best {
                return;
            }
            if free == 0 {
                *best = (*best).max(size);
                return;
            }
            // Branch on a vertex of maximum degree within the free set:
            // either exclude it (recurse on free minus v, only useful when
            // some neighbor is taken, handled by the take-neighbor branches)
            // or include it.  Classic scheme: pick v, then every maximal
            // independent set contains v or a neighbor of v.
            let mut v = free.trailing_zeros() as usize;
            let mut vd = (nbr[v] & free).count_ones();
            let mut bits = free;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let ud = (nbr[u] & free).count_ones();
                if ud > vd {
                    v = u;
                    vd = ud;
                }
            }
            let candidates = (nbr[v] & free) | (1 << v);
            let mut bits = candidates;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                go(free & !nbr[u] & !(1 << u), nbr, best, size + 1);
            }
        }
        let mut best = 0;
        let free = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        go(free, &nbr, &mut best, 0);
        Ok(best)
    }
}
