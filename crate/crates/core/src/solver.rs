//! Existence and construction of gamma-valued real flows by exact linear
//! algebra over the incidence matrix: integer solutions supported on a
//! spanning tree for bipartite graphs, half-integer solutions supported on
//! a spanning tree plus one odd-cycle edge otherwise.

use crate::error::{Error, Result};
use crate::flow::{FlowAssignment, GammaVector};
use crate::graph::Graph;
use crate::matrix;
use crate::rational::{rat, Rat};
use num_bigint::BigInt;
use num_traits::Zero;

/// Outcome of the existence test: either feasible, or the signed
/// part-indicator vector `y` whose pairing with gamma is the nonzero
/// imbalance obstructing the bipartite system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaFlowDecision {
    Feasible,
    /// Bipartite imbalance: `y` with `+1` on part 1 and `-1` on part 2,
    /// and the nonzero value `y . gamma`.
    Infeasible { y: Vec<Rat>, imbalance: Rat },
}

impl GammaFlowDecision {
    pub fn is_feasible(&self) -> bool {
        matches!(self, GammaFlowDecision::Feasible)
    }
}

/// A connected non-bipartite graph carries every gamma; a connected
/// bipartite graph carries gamma iff the two part sums agree.
pub fn gamma_flow_exists(g: &Graph, gamma: &GammaVector) -> Result<GammaFlowDecision> {
    if gamma.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: gamma.len(),
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertex_count() == 1 {
        // No edges: only the zero target is achievable.
        return Ok(if gamma[0].is_zero() {
            GammaFlowDecision::Feasible
        } else {
            GammaFlowDecision::Infeasible {
                y: vec![rat(1)],
                imbalance: gamma[0].clone(),
            }
        });
    }
    match g.bipartition()? {
        None => Ok(GammaFlowDecision::Feasible),
        Some(b) => {
            let y: Vec<Rat> = b
                .side
                .iter()
                .map(|&s| if s == 1 { rat(1) } else { rat(-1) })
                .collect();
            let imbalance = matrix::dot(&y, gamma);
            if imbalance.is_zero() {
                Ok(GammaFlowDecision::Feasible)
            } else {
                Ok(GammaFlowDecision::Infeasible { y, imbalance })
            }
        }
    }
}

/// Solves `A(G) w = gamma` exactly, using the structured constructions:
/// tree-supported for bipartite inputs, tree-plus-odd-edge otherwise.
pub fn solve_gamma_flow(g: &Graph, gamma: &GammaVector) -> Result<Option<FlowAssignment>> {
    match gamma_flow_exists(g, gamma)? {
        GammaFlowDecision::Infeasible { .. } => Ok(None),
        GammaFlowDecision::Feasible => {
            if g.vertex_count() == 1 {
                return Ok(Some(Vec::new()));
            }
            let w = if g.is_bipartite() {
                solve_tree_supported(g, gamma)?
            } else {
                solve_odd_structured(g, gamma)?
            };
            debug_assert_eq!(&matrix::incidence_apply(g, &w), gamma);
            Ok(Some(w))
        }
    }
}

/// Integer solution supported on a spanning tree, for bipartite balanced
/// systems with integer gamma.
pub fn solve_integer_bipartite(g: &Graph, gamma: &GammaVector) -> Result<FlowAssignment> {
    if gamma.iter().any(|v| !crate::rational::is_integer(v)) {
        return Err(Error::BadParameter("gamma must be integral".into()));
    }
    match gamma_flow_exists(g, gamma)? {
        GammaFlowDecision::Infeasible { .. } => Err(Error::BalanceViolated),
        GammaFlowDecision::Feasible => {
            if !g.is_bipartite() {
                return Err(Error::NotBipartite);
            }
            let w = solve_tree_supported(g, gamma)?;
            debug_assert!(w.iter().all(crate::rational::is_integer));
            Ok(w)
        }
    }
}

/// Half-integer solution supported on a spanning tree plus one odd-cycle
/// edge, for connected non-bipartite graphs with integer gamma.
pub fn solve_halfinteger(g: &Graph, gamma: &GammaVector) -> Result<FlowAssignment> {
    if gamma.iter().any(|v| !crate::rational::is_integer(v)) {
        return Err(Error::BadParameter("gamma must be integral".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_bipartite() {
        return Err(Error::Bipartite);
    }
    let w = solve_odd_structured(g, gamma)?;
    debug_assert!(w.iter().all(crate::rational::is_half_integer));
    Ok(w)
}

/// Unique solution with support on the deterministic spanning tree; the
/// off-tree coordinates are zero.  Requires the bipartite balance
/// condition (callers check it).
fn solve_tree_supported(g: &Graph, gamma: &GammaVector) -> Result<FlowAssignment> {
    let tree = g.spanning_tree()?;
    let mut in_tree = vec![false; g.edge_count()];
    for &e in &tree {
        in_tree[e] = true;
    }
    peel_forest(g, gamma, &in_tree)
}

/// Solution supported on a spanning tree plus one edge closing an odd
/// cycle: peel degree-1 vertices first, then solve the residual odd cycle
/// in closed form.
fn solve_odd_structured(g: &Graph, gamma: &GammaVector) -> Result<FlowAssignment> {
    let cycle = g
        .find_odd_cycle()?
        .ok_or(Error::Bipartite)?;
    // Spanning tree containing the cycle minus one edge: seed a union-find
    // with the cycle path, then extend greedily in edge order.
    let closing = cycle[0];
    let mut in_support = vec![false; g.edge_count()];
    let mut dsu = Dsu::new(g.vertex_count());
    for &e in cycle.iter().skip(1) {
        let (u, v) = g.edge(e);
        dsu.union(u, v);
        in_support[e] = true;
    }
    for e in 0..g.edge_count() {
        if e == closing || in_support[e] {
            continue;
        }
        let (u, v) = g.edge(e);
        if dsu.union(u, v) {
            in_support[e] = true;
        }
    }
    in_support[closing] = true;
    solve_on_support(g, gamma, &in_support, Some(&cycle))
}

/// Peels degree-1 vertices of the support subgraph, fixing their unique
/// incident edge value, and requires the support to be a forest covering
/// all residual demand.
fn peel_forest(g: &Graph, gamma: &GammaVector, in_support: &[bool]) -> Result<FlowAssignment> {
    solve_on_support(g, gamma, in_support, None)
}

fn solve_on_support(
    g: &Graph,
    gamma: &GammaVector,
    in_support: &[bool],
    cycle: Option<&[usize]>,
) -> Result<FlowAssignment> {
    let n = g.vertex_count();
    let mut w = vec![Rat::zero(); g.edge_count()];
    let mut residual: Vec<Rat> = gamma.to_vec();
    let mut alive_edge: Vec<bool> = in_support.to_vec();
    let mut deg = vec![0usize; n];
    for e in 0..g.edge_count() {
        if alive_edge[e] {
            let (u, v) = g.edge(e);
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    let mut alive_vertex = vec![true; n];
    let mut queue: std::collections::VecDeque<usize> =
        (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive_vertex[v] || deg[v] != 1 {
            continue;
        }
        let &(u, e) = g
            .adjacency(v)
            .iter()
            .find(|&&(_, e)| alive_edge[e])
            .ok_or_else(|| Error::Internal("peel lost an edge".into()))?;
        w[e] = residual[v].clone();
        residual[u] = &residual[u] - &w[e];
        alive_edge[e] = false;
        alive_vertex[v] = false;
        deg[v] = 0;
        deg[u] -= 1;
        if deg[u] == 1 {
            queue.push_back(u);
        } else if deg[u] == 0 {
            alive_vertex[u] = false;
            if !residual[u].is_zero() {
                return Err(Error::Internal(
                    "tree-supported solve left nonzero residual".into(),
                ));
            }
        }
    }
    // Whatever survives must be the odd cycle (or nothing, for forests).
    let leftover: Vec<usize> = (0..g.edge_count()).filter(|&e| alive_edge[e]).collect();
    if leftover.is_empty() {
        return Ok(w);
    }
    let cycle = cycle.ok_or_else(|| Error::Internal("unexpected cycle in tree solve".into()))?;
    let mut cyc: Vec<usize> = cycle.to_vec();
    cyc.sort_unstable();
    let mut left_sorted = leftover.clone();
    left_sorted.sort_unstable();
    if cyc != left_sorted {
        return Err(Error::Internal("peel did not reduce to the odd cycle".into()));
    }
    solve_cycle_closed_form(g, &mut w, &residual, cycle)?;
    Ok(w)
}

/// Solves the 1-sum-style system around an odd cycle in closed form:
/// writing the first edge value as `x`, every other edge value is an
/// affine function of `x` with coefficient alternating sign; the closing
/// constraint has `x`-coefficient 2 because the length is odd.
fn solve_cycle_closed_form(
    g: &Graph,
    w: &mut [Rat],
    residual: &[Rat],
    cycle_edges: &[usize],
) -> Result<()> {
    // Order the cycle as a vertex walk v0, v1, ..., with e_i = {v_i, v_{i+1}}.
    let l = cycle_edges.len();
    let mut edges_at: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for &e in cycle_edges {
        let (a, b) = g.edge(e);
        edges_at.entry(a).or_default().push(e);
        edges_at.entry(b).or_default().push(e);
    }
    let start_edge = *cycle_edges
        .iter()
        .min()
        .ok_or_else(|| Error::Internal("empty cycle".into()))?;
    let (v0, _) = g.edge(start_edge);
    let mut order = Vec::with_capacity(l);
    let mut walk_vertices = vec![v0];
    let mut prev_edge = usize::MAX;
    let mut cur = v0;
    for _ in 0..l {
        let e = edges_at[&cur]
            .iter()
            .copied()
            .find(|&e| e != prev_edge)
            .ok_or_else(|| Error::Internal("cycle walk stuck".into()))?;
        order.push(e);
        cur = g.other_endpoint(e, cur);
        walk_vertices.push(cur);
        prev_edge = e;
    }
    if cur != v0 {
        return Err(Error::Internal("cycle walk did not close".into()));
    }
    // w(e_i) = t_i + s_i * x with s_i = (-1)^i; vertex v_i (i >= 1) gives
    // w(e_i) = residual(v_i) - w(e_{i-1}).
    let mut t = vec![Rat::zero(); l];
    for i in 1..l {
        let vi = walk_vertices[i];
        t[i] = &residual[vi] - &t[i - 1];
    }
    // Closing constraint at v0: w(e_{l-1}) + w(e_0) = residual(v0), and the
    // x-coefficient is (-1)^{l-1} + 1 = 2 for odd l.
    let x = (&residual[v0] - &t[l - 1]) / rat(2);
    for (i, &e) in order.iter().enumerate() {
        let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
        w[e] = &t[i] + &(sign * &x);
    }
    Ok(())
}

/// Exact determinant of the incidence matrix of the odd cycle `C_l`.
pub fn odd_cycle_incidence_det(l: usize) -> Result<BigInt> {
    if l < 3 || l % 2 == 0 {
        return Err(Error::BadParameter("cycle length must be odd and >= 3".into()));
    }
    let c = crate::families::cycle(l)?;
    let rows = matrix::incidence_rows(&c);
    matrix::bareiss(rows)
        .det
        .ok_or_else(|| Error::Internal("square determinant missing".into()))
}

/// Integer basis of the 0-sum flows (the kernel of the incidence matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullspaceBasis {
    pub vectors: Vec<Vec<Rat>>,
}

impl NullspaceBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

pub fn nullspace(g: &Graph) -> NullspaceBasis {
    let basis = matrix::integer_nullspace(matrix::incidence_rows(g));
    NullspaceBasis {
        vectors: basis
            .into_iter()
            .map(|v| v.into_iter().map(Rat::from_integer).collect())
            .collect(),
    }
}

/// Generic dense solve of `A w = gamma`; test oracle for the structured
/// constructions.
pub fn solve_dense_oracle(g: &Graph, gamma: &GammaVector) -> Option<FlowAssignment> {
    matrix::solve_dense(&matrix::incidence_rat(g), gamma)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
        }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    /// Returns true when the union merged two components.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::families;
    use crate::flow::ones;
    use crate::rational::{is_half_integer, is_integer, ratio};

    #[test]
    fn existence_examples() {
        let k12 = families::star(3).unwrap();
        match gamma_flow_exists(&k12, &ones(3)).unwrap() {
            GammaFlowDecision::Infeasible { imbalance, .. } => {
                assert!(imbalance == rat(1) || imbalance == rat(-1));
            }
            _ => panic!("K_{{1,2}} with gamma = 1 must be infeasible"),
        }
        assert!(gamma_flow_exists(&families::cycle(5).unwrap(), &ones(5))
            .unwrap()
            .is_feasible());
        assert!(gamma_flow_exists(&families::cycle(4).unwrap(), &ones(4))
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn solve_examples() {
        let star = families::star(4).unwrap();
        let gamma = vec![rat(3), rat(1), rat(1), rat(1)];
        let w = solve_gamma_flow(&star, &gamma).unwrap().unwrap();
        assert_eq!(w, vec![rat(1), rat(1), rat(1)]);

        let c3 = families::cycle(3).unwrap();
        let w = solve_gamma_flow(&c3, &ones(3)).unwrap().unwrap();
        assert_eq!(w, vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)]);

        let p4 = families::path(4).unwrap();
        let w = solve_gamma_flow(&p4, &ones(4)).unwrap().unwrap();
        assert_eq!(w, vec![rat(1), rat(0), rat(1)]);
    }

    #[test]
    fn integer_bipartite_examples() {
        let k2 = families::complete(2).unwrap();
        let w = solve_integer_bipartite(&k2, &vec![rat(5), rat(5)]).unwrap();
        assert_eq!(w, vec![rat(5)]);

        let c4 = families::cycle(4).unwrap();
        let w = solve_integer_bipartite(&c4, &ones(4)).unwrap();
        assert_eq!(crate::flow::vertex_values(&c4, &w).unwrap(), ones(4));
        assert!(w.iter().any(|x| x.is_zero()));
        assert!(w.iter().all(is_integer));

        let c6 = families::cycle(6).unwrap();
        let gamma = vec![rat(2); 6];
        let w = solve_integer_bipartite(&c6, &gamma).unwrap();
        assert_eq!(crate::flow::vertex_values(&c6, &w).unwrap(), gamma);
        assert!(w.iter().all(is_integer));

        assert_eq!(
            solve_integer_bipartite(&families::star(3).unwrap(), &ones(3)),
            Err(Error::BalanceViolated)
        );
    }

    #[test]
    fn halfinteger_examples() {
        for n in [3usize, 5] {
            let c = families::cycle(n).unwrap();
            let w = solve_halfinteger(&c, &ones(n)).unwrap();
            assert!(w.iter().all(|x| x == &ratio(1, 2)));
        }
        // Triangle with a pendant vertex.
        let g = Graph::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let w = solve_halfinteger(&g, &ones(4)).unwrap();
        assert_eq!(crate::flow::vertex_values(&g, &w).unwrap(), ones(4));
        assert!(w.iter().all(is_half_integer));
        assert_eq!(w[3], rat(1));
        assert_eq!(
            solve_halfinteger(&families::cycle(4).unwrap(), &ones(4)),
            Err(Error::Bipartite)
        );
    }

    #[test]
    fn odd_cycle_determinants() {
        for l in (3..=15).step_by(2) {
            assert_eq!(odd_cycle_incidence_det(l).unwrap(), BigInt::from(2));
        }
        assert!(odd_cycle_incidence_det(4).is_err());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&families::path(5).unwrap()).dimension(), 0);
        assert_eq!(nullspace(&families::cycle(3).unwrap()).dimension(), 0);
        let basis = nullspace(&families::cycle(4).unwrap());
        assert_eq!(basis.dimension(), 1);
        let v = &basis.vectors[0];
        assert_eq!(
            matrix::incidence_apply(&families::cycle(4).unwrap(), v),
            vec![rat(0); 4]
        );
    }

    #[test]
    fn nullspace_dimension_formula() {
        for n in 2..=7 {
            for g in catalog::connected_graphs_up_to_iso(n).unwrap() {
                let d = nullspace(&g).dimension();
                let expect = g.edge_count() + if g.is_bipartite() { 1 } else { 0 } - g.vertex_count();
                assert_eq!(d, expect);
            }
        }
    }

    #[test]
    fn random_agreement_with_existence_and_structure() {
        let mut rng = catalog::seeded_rng(11);
        for trial in 0..220 {
            let n = 2 + (trial % 8);
            let g = catalog::random_connected_graph(n, trial % 4, &mut rng);
            let gamma = catalog::random_integer_gamma(n, -5, 5, &mut rng);
            let dec = gamma_flow_exists(&g, &gamma).unwrap();
            let sol = solve_gamma_flow(&g, &gamma).unwrap();
            assert_eq!(dec.is_feasible(), sol.is_some());
            // Cross-check against the dense oracle.
            assert_eq!(dec.is_feasible(), solve_dense_oracle(&g, &gamma).is_some());
            if let Some(w) = sol {
                assert_eq!(crate::flow::vertex_values(&g, &w).unwrap(), gamma);
                if g.is_bipartite() {
                    assert!(w.iter().all(is_integer));
                } else {
                    assert!(w.iter().all(is_half_integer));
                }
            }
        }
    }

    #[test]
    fn single_vertex_convention() {
        let g = Graph::new(1, &[]).unwrap();
        assert!(gamma_flow_exists(&g, &vec![rat(0)]).unwrap().is_feasible());
        assert!(!gamma_flow_exists(&g, &vec![rat(1)]).unwrap().is_feasible());
    }
}
