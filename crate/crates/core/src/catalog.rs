//! Small-instance corpora: exhaustive isomorphism representatives of
//! graphs and trees, and seeded random generators for the property tests.
//!
//! Representatives are produced by augmentation (add one vertex in every
//! possible way, deduplicate by canonical form), which keeps the counts at
//! the published values without any external tooling.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Canonical adjacency bitmask: minimum over all vertex permutations.
/// Exponential, fine for n <= 8.
fn canonical_mask(n: usize, adj: &[u64]) -> u128 {
    fn mask_under(n: usize, adj: &[u64], perm: &[usize]) -> u128 {
        let mut m = 0u128;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[perm[i]] >> perm[j] & 1 == 1 {
                    m |= 1 << bit;
                }
                bit += 1;
            }
        }
        m
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u128::MAX;
    loop {
        best = best.min(mask_under(n, adj, &perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn graph_from_adj(n: usize, adj: &[u64]) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i] >> j & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).expect("adjacency matrix is simple")
}

/// All graphs on exactly `n` vertices up to isomorphism (including
/// disconnected ones).  Capped at `n <= 8`.
pub fn graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    if n > 8 {
        return Err(Error::CapExceeded(
            "isomorphism catalog capped at 8 vertices".into(),
        ));
    }
    let mut reps: Vec<Vec<u64>> = vec![vec![0u64]];
    for k in 2..=n.max(1) {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for adj in &reps {
            // Attach a new vertex to every subset of the existing ones.
            for subset in 0..(1u64 << (k - 1)) {
                let mut a = adj.clone();
                a.push(subset);
                for (i, row) in a.iter_mut().enumerate().take(k - 1) {
                    if subset >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                if seen.insert(canonical_mask(k, &a)) {
                    next.push(a);
                }
            }
        }
        reps = next;
    }
    if n == 0 {
        return Ok(vec![Graph::new(0, &[]).unwrap()]);
    }
    Ok(reps.iter().map(|a| graph_from_adj(n, a)).collect())
}

/// Connected graphs on exactly `n` vertices up to isomorphism.
pub fn connected_graphs_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    Ok(graphs_up_to_iso(n)?
        .into_iter()
        .filter(|g| g.is_connected())
        .collect())
}

/// AHU canonical string of a free tree (rooted at its center, or the
/// smaller canonical form of the two centers).
fn tree_canonical(g: &Graph) -> String {
    fn encode(g: &Graph, root: usize, parent: usize) -> String {
        let mut parts: Vec<String> = g
            .adjacency(root)
            .iter()
            .filter(|&&(w, _)| w != parent)
            .map(|&(w, _)| encode(g, w, root))
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }
    // Centers: repeatedly strip leaves.
    let n = g.vertex_count();
    if n == 1 {
        return "()".into();
    }
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &(w, _) in g.adjacency(v) {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    centers
        .iter()
        .map(|&c| encode(g, c, usize::MAX))
        .min()
        .unwrap()
}

/// All free trees on exactly `n` vertices up to isomorphism, by leaf
/// augmentation with AHU deduplication.
pub fn trees_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 16 {
        return Err(Error::CapExceeded("tree catalog capped at 16 vertices".into()));
    }
    let mut reps = vec![Graph::new(1, &[]).unwrap()];
    for k in 2..=n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for t in &reps {
            for v in 0..t.vertex_count() {
                let mut edges = t.edges().to_vec();
                edges.push((v, k - 1));
                let bigger = Graph::new(k, &edges).unwrap();
                if seen.insert(tree_canonical(&bigger)) {
                    next.push(bigger);
                }
            }
        }
        reps = next;
    }
    Ok(reps)
}

/// Balanced (bipartite with equal parts) trees on `n` vertices up to
/// isomorphism.
pub fn balanced_trees_up_to_iso(n: usize) -> Result<Vec<Graph>> {
    Ok(trees_up_to_iso(n)?
        .into_iter()
        .filter(|t| {
            t.bipartition()
                .map(|b| b.map_or(false, |b| b.is_balanced()))
                .unwrap_or(false)
        })
        .collect())
}

/// Random labeled tree from a random Pruefer sequence.
pub fn random_tree(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n >= 1);
    if n == 1 {
        return Graph::new(1, &[]).unwrap();
    }
    if n == 2 {
        return Graph::new(2, &[(0, 1)]).unwrap();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut deg = vec![1usize; n];
    for &s in &seq {
        deg[s] += 1;
    }
    let mut edges = Vec::new();
    let mut leaves: std::collections::BTreeSet<usize> =
        (0..n).filter(|&v| deg[v] == 1).collect();
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s)));
        deg[s] -= 1;
        if deg[s] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0].min(rest[1]), rest[0].max(rest[1])));
    Graph::new(n, &edges).expect("pruefer decoding yields a tree")
}

/// Random connected graph: random spanning tree plus `extra` random edges.
pub fn random_connected_graph(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    let tree = random_tree(n, rng);
    let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
    let mut present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
    let mut attempts = 0;
    let max_edges = n * (n - 1) / 2;
    while edges.len() < (n - 1 + extra).min(max_edges) && attempts < 20 * (extra + 1) {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if present.insert(e) {
            edges.push(e);
        }
    }
    Graph::new(n, &edges).expect("random connected graph is simple")
}

pub fn random_connected_nonbipartite(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = random_connected_graph(n, extra.max(1), rng);
        if !g.is_bipartite() {
            return g;
        }
    }
}

pub fn random_connected_bipartite(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    // A tree is bipartite; add extra edges that respect the 2-coloring.
    loop {
        let tree = random_tree(n, rng);
        let side = tree.try_two_color().unwrap();
        let mut edges: Vec<(usize, usize)> = tree.edges().to_vec();
        let mut present: std::collections::HashSet<(usize, usize)> =
            edges.iter().copied().collect();
        for _ in 0..20 * (extra + 1) {
            if edges.len() >= n - 1 + extra {
                break;
            }
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b || side[a] == side[b] {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if present.insert(e) {
                edges.push(e);
            }
        }
        return Graph::new(n, &edges).expect("random bipartite graph is simple");
    }
}

/// Random connected balanced bipartite graph on `n` (even) vertices.
pub fn random_balanced_bipartite(n: usize, extra: usize, rng: &mut ChaCha8Rng) -> Graph {
    assert!(n % 2 == 0 && n >= 2);
    loop {
        let g = random_connected_bipartite(n, extra, rng);
        let b = g.bipartition().unwrap().unwrap();
        if b.is_balanced() {
            return g;
        }
    }
}

/// Random connected unicyclic graph: random tree plus one closing edge.
pub fn random_unicyclic(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let tree = random_tree(n, rng);
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || tree.has_edge(a, b) {
            continue;
        }
        let mut edges = tree.edges().to_vec();
        edges.push((a.min(b), a.max(b)));
        return Graph::new(n, &edges).unwrap();
    }
}

/// Random integer gamma vector with entries in `[lo, hi]`.
pub fn random_integer_gamma(n: usize, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> Vec<crate::Rat> {
    (0..n)
        .map(|_| crate::rational::rat(rng.gen_range(lo..=hi)))
        .collect()
}
