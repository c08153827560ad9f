//! Factor machinery: perfect matchings, {1,2}-factors through the
//! bipartite double cover, f-factors by gadget reduction, and the
//! 1-/2-factorizations used by the regular-graph flow constructions.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matching::{
    bipartite_max_matching, blossom_max_matching, matching_edges, matching_size,
};

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<usize>,
}

/// A spanning subgraph given by its edge set, with the degree it induces
/// at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub edges: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl Factor {
    pub fn from_edges(g: &Graph, mut edges: Vec<usize>) -> Factor {
        edges.sort_unstable();
        edges.dedup();
        let mut degrees = vec![0usize; g.vertex_count()];
        for &e in &edges {
            let (u, v) = g.edge(e);
            degrees[u] += 1;
            degrees[v] += 1;
        }
        Factor { edges, degrees }
    }
}

/// Edge-disjoint factors partitioning the host's edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorDecomposition {
    pub factors: Vec<Factor>,
}

pub fn max_matching(g: &Graph) -> Matching {
    let mate = blossom_max_matching(g);
    Matching {
        edges: matching_edges(g, &mate),
    }
}

pub fn perfect_matching(g: &Graph) -> Option<Matching> {
    let n = g.vertex_count();
    if n % 2 == 1 {
        return None;
    }
    let mate = blossom_max_matching(g);
    if matching_size(&mate) * 2 == n {
        Some(Matching {
            edges: matching_edges(g, &mate),
        })
    } else {
        None
    }
}

/// Spanning subgraph whose components are single edges and cycles, if one
/// exists.  Found as a perfect matching of the bipartite double cover:
/// symmetrizing the matching gives each original edge weight 0, 1/2 or 1,
/// and every vertex total weight exactly 1, so the positive-weight edges
/// are the factor.
pub fn one_two_factor(g: &Graph) -> Option<Factor> {
    let (cover, copies) = g.bipartite_double_cover();
    let mate = bipartite_max_matching(&cover).expect("double cover is bipartite");
    if matching_size(&mate) * 2 != cover.vertex_count() {
        return None;
    }
    let mut matched = vec![false; cover.edge_count()];
    for e in crate::matching::matching_edges(&cover, &mate) {
        matched[e] = true;
    }
    let edges: Vec<usize> = (0..g.edge_count())
        .filter(|&e| matched[copies[e].0] || matched[copies[e].1])
        .collect();
    let f = Factor::from_edges(g, edges);
    debug_assert!(f.degrees.iter().all(|&d| d == 1 || d == 2));
    Some(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    PerfectMatching,
    OneTwoFactor,
}

/// Whether some factor of the requested kind contains edge `e`.
pub fn edge_in_some_factor(g: &Graph, e: usize, kind: FactorKind) -> bool {
    let (u, v) = g.edge(e);
    match kind {
        FactorKind::PerfectMatching => {
            // Fix e by deleting its endpoints and matching the rest.
            let (rest, _) = g.delete_vertices(&[u, v]);
            rest.vertex_count() == 0 || perfect_matching(&rest).is_some()
        }
        FactorKind::OneTwoFactor => {
            // e is in some factor iff the double cover has a perfect
            // matching using a copy of e; fix one copy (the x<->y swap
            // automorphism makes the two copies equivalent).
            let (cover, copies) = g.bipartite_double_cover();
            let (a, b) = cover.edge(copies[e].0);
            let (rest, _) = cover.delete_vertices(&[a, b]);
            rest.vertex_count() == 0 || perfect_matching(&rest).is_some()
        }
    }
}

/// Spanning subgraph with exact degree `f(v)` at every vertex, via the
/// gadget reduction to perfect matching: vertex v becomes deg(v) external
/// nodes (one per incident edge) joined completely to deg(v) - f(v)
/// internal nodes; an original edge is in the factor iff the edge between
/// its two external nodes is matched.
pub fn f_factor(g: &Graph, f: &[usize]) -> Result<Option<Factor>> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.len(),
        });
    }
    for v in 0..n {
        if f[v] > g.degree(v) {
            return Err(Error::DemandOutOfRange(v));
        }
    }
    // Node layout: externals first (one per edge endpoint), then internals.
    let mut external = vec![[0usize; 2]; g.edge_count()];
    let mut count = 0usize;
    let mut ext_of_vertex = vec![Vec::new(); n];
    for v in 0..n {
        for &(_, e) in g.adjacency(v) {
            let side = if g.edge(e).0 == v { 0 } else { 1 };
            external[e][side] = count;
            ext_of_vertex[v].push(count);
            count += 1;
        }
    }
    let mut list: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        for _ in 0..g.degree(v) - f[v] {
            let internal = count;
            count += 1;
            for &x in &ext_of_vertex[v] {
                list.push((x, internal));
            }
        }
    }
    let cross_start = list.len();
    for e in 0..g.edge_count() {
        list.push((external[e][0], external[e][1]));
    }
    let gadget = Graph::new(count, &list).expect("gadget graph is simple");
    let Some(matching) = perfect_matching(&gadget) else {
        return Ok(None);
    };
    let chosen: Vec<usize> = matching
        .edges
        .iter()
        .filter(|&&ge| ge >= cross_start)
        .map(|&ge| ge - cross_start)
        .collect();
    let factor = Factor::from_edges(g, chosen);
    debug_assert_eq!(factor.degrees, f);
    Ok(Some(factor))
}

fn induced_components(g: &Graph) -> Vec<(Graph, Vec<usize>, Vec<usize>)> {
    // (component graph, vertex back-map, edge back-map)
    let comp = g.components();
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    (0..ncomp)
        .map(|c| {
            let remove: Vec<usize> = (0..g.vertex_count()).filter(|&v| comp[v] != c).collect();
            let (sub, old_of) = g.delete_vertices(&remove);
            let edge_back: Vec<usize> = sub
                .edges()
                .iter()
                .map(|&(u, v)| {
                    g.edge_index(old_of[u], old_of[v])
                        .expect("component edge in host")
                })
                .collect();
            (sub, old_of, edge_back)
        })
        .collect()
}

/// Splits a graph with all degrees even into two spanning subgraphs where
/// every vertex keeps half its degree, by alternating along Euler
/// circuits.  Requires every component to have an even number of edges.
pub fn euler_split(g: &Graph) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut half = [Vec::new(), Vec::new()];
    for (sub, _, edge_back) in induced_components(g) {
        if sub.edge_count() % 2 != 0 {
            return Err(Error::BadParameter(
                "euler split needs an even component size".into(),
            ));
        }
        for (i, e) in sub.euler_circuit()?.into_iter().enumerate() {
            half[i % 2].push(edge_back[e]);
        }
    }
    Ok((half[0].clone(), half[1].clone()))
}

/// Decomposes a k-regular bipartite graph into k perfect matchings:
/// halving by Euler splits while k is even, matching extraction when odd.
pub fn one_factorization_bipartite(g: &Graph) -> Result<FactorDecomposition> {
    if g.try_two_color().is_none() {
        return Err(Error::NotBipartite);
    }
    let k = g.regularity().ok_or(Error::NotRegular)?;
    let factors = one_factorize_rec(g, k)?
        .into_iter()
        .map(|edges| Factor::from_edges(g, edges))
        .collect();
    Ok(FactorDecomposition { factors })
}

fn one_factorize_rec(g: &Graph, k: usize) -> Result<Vec<Vec<usize>>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    if k % 2 == 0 {
        let (a, b) = euler_split(g)?;
        let mut out = Vec::with_capacity(k);
        for part in [a, b] {
            let (sub, edge_back) = g.edge_subgraph(&part);
            for f in one_factorize_rec(&sub, k / 2)? {
                out.push(f.into_iter().map(|e| edge_back[e]).collect());
            }
        }
        return Ok(out);
    }
    // k odd: a k-regular bipartite graph always has a perfect matching.
    let mate = bipartite_max_matching(g)?;
    if matching_size(&mate) * 2 != g.vertex_count() {
        return Err(Error::Internal(
            "regular bipartite graph without perfect matching".into(),
        ));
    }
    let matched = crate::matching::matching_edges(g, &mate);
    let mut in_matching = vec![false; g.edge_count()];
    for &e in &matched {
        in_matching[e] = true;
    }
    let rest: Vec<usize> = (0..g.edge_count()).filter(|&e| !in_matching[e]).collect();
    let (sub, edge_back) = g.edge_subgraph(&rest);
    let mut out = vec![matched];
    for f in one_factorize_rec(&sub, k - 1)? {
        out.push(f.into_iter().map(|e| edge_back[e]).collect());
    }
    Ok(out)
}

/// Decomposes a 2k-regular graph into k spanning 2-regular subgraphs:
/// orient along Euler circuits, 1-factorize the out/in bipartite graph,
/// and read each matching back as a vertex-disjoint cycle cover.
pub fn two_factorization(g: &Graph) -> Result<FactorDecomposition> {
    let r = g.regularity().ok_or(Error::NotRegular)?;
    if r % 2 != 0 {
        let v = (0..g.vertex_count()).find(|&v| g.degree(v) % 2 == 1).unwrap();
        return Err(Error::OddDegree(v));
    }
    let n = g.vertex_count();
    // Oriented edges u -> v become edges (u, n + v) of the out/in graph.
    let mut oriented: Vec<(usize, usize)> = Vec::with_capacity(g.edge_count());
    for (sub, old_of, _) in induced_components(g) {
        let circuit = sub.euler_circuit()?;
        let mut at = match circuit.first() {
            Some(&e0) => {
                // Pick the endpoint consistent with the next edge.
                let (a, b) = sub.edge(e0);
                if circuit.len() > 1 {
                    let (c, d) = sub.edge(circuit[1]);
                    if b == c || b == d {
                        a
                    } else {
                        b
                    }
                } else {
                    a
                }
            }
            None => continue,
        };
        for &e in &circuit {
            let to = sub.other_endpoint(e, at);
            oriented.push((old_of[at], old_of[to]));
            at = to;
        }
    }
    let list: Vec<(usize, usize)> = oriented.iter().map(|&(u, v)| (u, n + v)).collect();
    let outin = Graph::new(2 * n, &list).expect("orientation graph is simple");
    let matchings = one_factorize_rec(&outin, r / 2)?;
    let factors = matchings
        .into_iter()
        .map(|m| {
            let edges: Vec<usize> = m
                .iter()
                .map(|&oe| {
                    let (u, v) = oriented[oe];
                    g.edge_index(u, v).expect("oriented edge in host")
                })
                .collect();
            let f = Factor::from_edges(g, edges);
            debug_assert!(f.degrees.iter().all(|&d| d == 2));
            f
        })
        .collect();
    Ok(FactorDecomposition { factors })
}

/// Default vertex cap for the demand-pattern search below.
pub const COMPONENT_FACTOR_CAP: usize = 14;

/// Spanning subgraph of an odd-regular graph in which every component is
/// (k-1)- or k-regular.  Components of such a factor cannot mix the two
/// degrees, so edges joining the two demand classes are dropped and each
/// class keeps its own uniform demand; the search scans demand patterns in
/// lexicographic order and returns the first that admits an f-factor.
pub fn regular_component_factor(g: &Graph, k: usize, cap: usize) -> Result<Option<Factor>> {
    let r = g.regularity().ok_or(Error::NotRegular)?;
    if r % 2 == 0 || r < 3 {
        return Err(Error::BadParameter("degree must be odd and >= 3".into()));
    }
    if k < 1 || 3 * k > 2 * r {
        return Err(Error::BadParameter(format!(
            "k = {k} outside [1, 2r/3] for r = {r}"
        )));
    }
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "demand-pattern search capped at {cap} vertices, got {n}"
        )));
    }
    for mask in 0u64..(1u64 << n) {
        // Bit set: demand k; clear: demand k - 1.
        let demand: Vec<usize> = (0..n)
            .map(|v| if mask >> v & 1 == 1 { k } else { k - 1 })
            .collect();
        let same_class: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                (mask >> u & 1) == (mask >> v & 1)
            })
            .collect();
        let (sub, edge_back) = g.edge_subgraph(&same_class);
        if (0..n).any(|v| demand[v] > sub.degree(v)) {
            continue;
        }
        if let Some(f) = f_factor(&sub, &demand)? {
            let edges: Vec<usize> = f.edges.iter().map(|&e| edge_back[e]).collect();
            let factor = Factor::from_edges(g, edges);
            debug_assert!(component_regular_degrees(g, &factor, k));
            return Ok(Some(factor));
        }
    }
    Ok(None)
}

fn component_regular_degrees(g: &Graph, f: &Factor, k: usize) -> bool {
    let (sub, _) = g.edge_subgraph(&f.edges);
    let comp = sub.components();
    let ncomp = comp.iter().copied().max().map_or(0, |c| c + 1);
    for c in 0..ncomp {
        let degrees: Vec<usize> = (0..sub.vertex_count())
            .filter(|&v| comp[v] == c)
            .map(|v| sub.degree(v))
            .collect();
        let d = degrees[0];
        if degrees.iter().any(|&x| x != d) || (d != k && d + 1 != k) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::families;

    fn is_matching(g: &Graph, edges: &[usize]) -> bool {
        let mut seen = vec![false; g.vertex_count()];
        for &e in edges {
            let (u, v) = g.edge(e);
            if seen[u] || seen[v] {
                return false;
            }
            seen[u] = true;
            seen[v] = true;
        }
        true
    }

    #[test]
    fn matchings() {
        assert_eq!(max_matching(&families::cycle(4).unwrap()).edges.len(), 2);
        assert_eq!(max_matching(&families::star(4).unwrap()).edges.len(), 1);
        let pete = families::petersen();
        let pm = perfect_matching(&pete).unwrap();
        assert!(is_matching(&pete, &pm.edges));
        assert_eq!(pm.edges.len(), 5);
        assert!(perfect_matching(&families::cycle(5).unwrap()).is_none());
        let c6 = families::cycle(6).unwrap();
        assert_eq!(perfect_matching(&c6).unwrap().edges.len(), 3);
    }

    #[test]
    fn one_two_factors() {
        let c5 = families::cycle(5).unwrap();
        let f = one_two_factor(&c5).unwrap();
        assert_eq!(f.edges.len(), 5);
        assert!(f.degrees.iter().all(|&d| d == 2));

        let k4 = families::complete(4).unwrap();
        let f = one_two_factor(&k4).unwrap();
        assert!(f.degrees.iter().all(|&d| d == 1 || d == 2));

        assert!(one_two_factor(&families::star(4).unwrap()).is_none());
    }

    #[test]
    fn one_two_factor_components_are_edges_and_cycles() {
        let mut rng = catalog::seeded_rng(47);
        for trial in 0..50 {
            let g = catalog::random_connected_graph(4 + trial % 6, trial % 5, &mut rng);
            if let Some(f) = one_two_factor(&g) {
                let (sub, _) = g.edge_subgraph(&f.edges);
                let comp = sub.components();
                let ncomp = comp.iter().copied().max().unwrap() + 1;
                for c in 0..ncomp {
                    let vs: Vec<usize> =
                        (0..sub.vertex_count()).filter(|&v| comp[v] == c).collect();
                    let degs: Vec<usize> = vs.iter().map(|&v| sub.degree(v)).collect();
                    let es = vs.iter().map(|&v| sub.degree(v)).sum::<usize>() / 2;
                    if degs.iter().all(|&d| d == 1) {
                        assert_eq!(vs.len(), 2);
                        assert_eq!(es, 1);
                    } else {
                        assert!(degs.iter().all(|&d| d == 2));
                        assert_eq!(es, vs.len());
                    }
                }
            }
        }
    }

    #[test]
    fn forced_edges() {
        let c6 = families::cycle(6).unwrap();
        for e in 0..6 {
            assert!(edge_in_some_factor(&c6, e, FactorKind::PerfectMatching));
        }
        let p4 = families::path(4).unwrap();
        assert!(!edge_in_some_factor(&p4, 1, FactorKind::PerfectMatching));
        assert!(edge_in_some_factor(&p4, 0, FactorKind::PerfectMatching));
        let c5 = families::cycle(5).unwrap();
        for e in 0..5 {
            assert!(edge_in_some_factor(&c5, e, FactorKind::OneTwoFactor));
        }
    }

    #[test]
    fn f_factors() {
        let c4 = families::cycle(4).unwrap();
        let f = f_factor(&c4, &[2, 2, 2, 2]).unwrap().unwrap();
        assert_eq!(f.edges.len(), 4);
        let f = f_factor(&c4, &[1, 1, 1, 1]).unwrap().unwrap();
        assert_eq!(f.edges.len(), 2);
        let k5 = families::complete(5).unwrap();
        let f = f_factor(&k5, &[2; 5]).unwrap().unwrap();
        assert!(f.degrees.iter().all(|&d| d == 2));
        assert!(f_factor(&c4, &[3, 1, 1, 1]).is_err());
        assert!(f_factor(&c4, &[2, 1, 1, 1]).unwrap().is_none());
    }

    #[test]
    fn f_factor_matches_enumeration() {
        let mut rng = catalog::seeded_rng(53);
        use rand::Rng;
        for trial in 0..40 {
            let g = catalog::random_connected_graph(5, trial % 4, &mut rng);
            let m = g.edge_count();
            if m > 12 {
                continue;
            }
            let f: Vec<usize> = (0..5).map(|v| rng.gen_range(0..=g.degree(v))).collect();
            let exists = (0u32..1 << m).any(|s| {
                let mut deg = vec![0usize; 5];
                for e in 0..m {
                    if s >> e & 1 == 1 {
                        let (u, v) = g.edge(e);
                        deg[u] += 1;
                        deg[v] += 1;
                    }
                }
                deg == f
            });
            assert_eq!(f_factor(&g, &f).unwrap().is_some(), exists);
        }
    }

    fn check_one_factorization(g: &Graph, k: usize) {
        let d = one_factorization_bipartite(g).unwrap();
        assert_eq!(d.factors.len(), k);
        let mut seen = vec![false; g.edge_count()];
        for f in &d.factors {
            assert!(f.degrees.iter().all(|&x| x == 1));
            for &e in &f.edges {
                assert!(!seen[e]);
                seen[e] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn one_factorizations() {
        check_one_factorization(&families::cycle(6).unwrap(), 2);
        check_one_factorization(&families::complete_bipartite(3, 3).unwrap(), 3);
        check_one_factorization(&families::complete_bipartite(4, 4).unwrap(), 4);
        let (cover, _) = families::petersen().bipartite_double_cover();
        check_one_factorization(&cover, 3);
        assert!(one_factorization_bipartite(&families::cycle(5).unwrap()).is_err());
    }

    fn check_two_factorization(g: &Graph, k: usize) {
        let d = two_factorization(g).unwrap();
        assert_eq!(d.factors.len(), k);
        let mut seen = vec![false; g.edge_count()];
        for f in &d.factors {
            assert!(f.degrees.iter().all(|&x| x == 2));
            for &e in &f.edges {
                assert!(!seen[e]);
                seen[e] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn two_factorizations() {
        check_two_factorization(&families::cycle(5).unwrap(), 1);
        check_two_factorization(&families::complete(5).unwrap(), 2);
        check_two_factorization(&families::complete(7).unwrap(), 3);
        assert!(two_factorization(&families::complete(4).unwrap()).is_err());
    }

    #[test]
    fn component_regular_factors() {
        let k4 = families::complete(4).unwrap();
        let f = regular_component_factor(&k4, 2, COMPONENT_FACTOR_CAP)
            .unwrap()
            .unwrap();
        assert!(component_regular_degrees(&k4, &f, 2));

        let pete = families::petersen();
        let f = regular_component_factor(&pete, 2, COMPONENT_FACTOR_CAP)
            .unwrap()
            .unwrap();
        assert!(component_regular_degrees(&pete, &f, 2));

        let k6 = families::complete(6).unwrap();
        let f = regular_component_factor(&k6, 3, COMPONENT_FACTOR_CAP)
            .unwrap()
            .unwrap();
        assert!(component_regular_degrees(&k6, &f, 3));

        assert!(matches!(
            regular_component_factor(&pete, 2, 5),
            Err(Error::CapExceeded(_))
        ));
        assert!(regular_component_factor(&k4, 3, 14).is_err());
    }

    #[test]
    fn odd_cycle_cactus_has_one_two_factor() {
        // Connected, minimum degree 2, no even cycle: a {1,2}-factor must
        // exist (each odd cycle covers itself).
        let mut rng = catalog::seeded_rng(59);
        use rand::Rng;
        for _ in 0..20 {
            let parts: Vec<usize> = (0..rng.gen_range(1..4))
                .map(|_| 2 * rng.gen_range(1..3) + 1)
                .collect();
            let attach: Vec<usize> = (1..parts.len()).map(|i| i % 3).collect();
            let g = families::odd_cycle_cactus(&parts, &attach).unwrap();
            if g.vertex_count() > 14 {
                continue;
            }
            assert!(one_two_factor(&g).is_some(), "cactus {:?}", parts);
        }
    }
}
