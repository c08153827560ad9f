//! Generators for the named graph families used in tests and the CLI:
//! paths, cycles, stars, complete and complete bipartite graphs,
//! circulants, the Petersen graph, the two-block bipartite obstruction
//! graph, and odd-cycle cacti.  The extremal trees and unicyclic extremal
//! graphs live in [`crate::tree`].

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadParameter("path needs at least 1 vertex".into()));
    }
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::BadParameter("cycle needs at least 3 vertices".into()));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges)
}

/// Star `K_{1,n-1}` with center 0.
pub fn star(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::BadParameter("star needs at least 2 vertices".into()));
    }
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Graph::new(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Graph::new(n, &edges)
}

/// `K_{a,b}` with part one on `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    Graph::new(a + b, &edges)
}

/// Circulant graph: vertex `i` joined to `i ± o` for each offset `o`.
pub fn circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    for &o in offsets {
        if o == 0 || o > n / 2 {
            return Err(Error::BadParameter(format!(
                "circulant offset {o} out of range for n={n}"
            )));
        }
        for i in 0..n {
            let j = (i + o) % n;
            let e = (i.min(j), i.max(j));
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
    }
    edges.sort_unstable();
    Graph::new(n, &edges)
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    for i in 0..5 {
        edges.push((i, 5 + i));
    }
    Graph::new(10, &edges).expect("petersen is simple")
}

/// Two disjoint copies of `K_{s, s(1+t)+1}` with one small-part vertex of
/// the first copy joined to the whole small part of the second copy.
/// Balanced bipartite, `s`-edge-connected, and it admits no 1-sum
/// `[-t, infinity)`-flow.  The `s` joining edges come last in the edge
/// order.
pub fn two_block_obstruction(s: usize, t: usize) -> Result<Graph> {
    if s == 0 || t == 0 {
        return Err(Error::BadParameter("need s >= 1 and t >= 1".into()));
    }
    let big = s * (1 + t) + 1;
    // First copy: X = 0..s, Y = s..s+big.
    // Second copy: X' = s+big..s+big+s, Y' after that.
    let x = |i: usize| i;
    let y = |j: usize| s + j;
    let xp = |i: usize| s + big + i;
    let yp = |j: usize| 2 * s + big + j;
    let n = 2 * (s + big);
    let mut edges = Vec::new();
    for i in 0..s {
        for j in 0..big {
            edges.push((x(i), y(j)));
        }
    }
    for i in 0..s {
        for j in 0..big {
            edges.push((xp(i), yp(j)));
        }
    }
    for i in 0..s {
        edges.push((x(0), xp(i)));
    }
    Graph::new(n, &edges)
}

/// Edge indices of the joining edges of [`two_block_obstruction`].
pub fn two_block_joining_edges(s: usize, t: usize) -> Vec<usize> {
    let big = s * (1 + t) + 1;
    (2 * s * big..2 * s * big + s).collect()
}

/// A cactus whose blocks are odd cycles sharing single vertices; every
/// degree is even and at least 2, and there is no even cycle.
/// `cycle_lengths[0]` is the root block; each later block is attached at
/// `attach[i - 1]`, a vertex index existing at that point.
pub fn odd_cycle_cactus(cycle_lengths: &[usize], attach: &[usize]) -> Result<Graph> {
    if cycle_lengths.is_empty() || attach.len() + 1 != cycle_lengths.len() {
        return Err(Error::BadParameter("need one attach point per extra block".into()));
    }
    for &l in cycle_lengths {
        if l < 3 || l % 2 == 0 {
            return Err(Error::BadParameter("blocks must be odd cycles".into()));
        }
    }
    let mut edges = Vec::new();
    let mut n = cycle_lengths[0];
    for i in 0..cycle_lengths[0] {
        edges.push((i, (i + 1) % cycle_lengths[0]));
    }
    for (b, &l) in cycle_lengths.iter().enumerate().skip(1) {
        let a = attach[b - 1];
        if a >= n {
            return Err(Error::BadParameter(format!("attach point {a} out of range")));
        }
        // New cycle: a, n, n+1, ..., n+l-2, back to a.
        edges.push((a, n));
        for i in 0..l - 2 {
            edges.push((n + i, n + i + 1));
        }
        edges.push((a, n + l - 2));
        n += l - 1;
    }
    let edges: Vec<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    Graph::new(n, &edges)
}
