//! Flows on trees and unicyclic graphs: the leaf-pruning level
//! decomposition, the unique tree flow by level recursion, the range
//! analysis with its extremal trees, and the constructive case analysis
//! for unicyclic graphs with all vertex sums equal to 1.

use crate::error::{Error, Result};
use crate::flow::{ones, vertex_values, FlowAssignment, GammaVector};
use crate::graph::Graph;
use crate::rational::{rat, ratio, Rat};
use num_traits::{Signed, Zero};

/// One pruning level: the leaves peeled together and their edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneLevel {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalKind {
    /// The peel ended at a single edge.
    Edge,
    /// The peel ended at a star with the given center.
    Star { center: usize },
}

/// The full level decomposition of a tree: levels of simultaneously
/// peeled leaves, ending at a single edge or a star.  Level sizes are
/// non-increasing and the edge sets partition the tree's edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruningTrace {
    pub levels: Vec<PruneLevel>,
    pub terminal: TerminalKind,
}

impl PruningTrace {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.vertices.len()).collect()
    }
    /// Leaf count of the input tree.
    pub fn p1(&self) -> usize {
        self.levels[0].vertices.len()
    }
}

/// Peels leaves level by level until a single edge or a star remains.
pub fn prune(t: &Graph) -> Result<PruningTrace> {
    if !t.is_tree() {
        return Err(Error::NotTree);
    }
    let n = t.vertex_count();
    if n < 2 {
        return Err(Error::BadParameter("pruning needs at least one edge".into()));
    }
    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut deg = t.degrees();
    let mut edge_alive = vec![true; t.edge_count()];
    let mut levels = Vec::new();
    loop {
        if alive_count == 2 {
            let vs: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
            let es: Vec<usize> = (0..t.edge_count()).filter(|&e| edge_alive[e]).collect();
            levels.push(PruneLevel { vertices: vs, edges: es });
            return Ok(PruningTrace {
                levels,
                terminal: TerminalKind::Edge,
            });
        }
        let centers: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] >= 2).collect();
        if centers.len() == 1 {
            let center = centers[0];
            let vs: Vec<usize> = (0..n).filter(|&v| alive[v] && v != center).collect();
            let es: Vec<usize> = (0..t.edge_count()).filter(|&e| edge_alive[e]).collect();
            levels.push(PruneLevel { vertices: vs, edges: es });
            return Ok(PruningTrace {
                levels,
                terminal: TerminalKind::Star { center },
            });
        }
        let leaves: Vec<usize> = (0..n).filter(|&v| alive[v] && deg[v] == 1).collect();
        let mut edges = Vec::with_capacity(leaves.len());
        for &v in &leaves {
            let &(u, e) = t
                .adjacency(v)
                .iter()
                .find(|&&(_, e)| edge_alive[e])
                .expect("leaf has an alive edge");
            edges.push(e);
            edge_alive[e] = false;
            deg[u] -= 1;
            deg[v] = 0;
            alive[v] = false;
            alive_count -= 1;
        }
        levels.push(PruneLevel {
            vertices: leaves,
            edges,
        });
    }
}

/// The unique solution of the vertex-sum system on a tree, computed by
/// the pruning-level recursion; `None` when the balance condition fails.
pub fn tree_unique_flow(t: &Graph, gamma: &GammaVector) -> Result<Option<FlowAssignment>> {
    if !t.is_tree() {
        return Err(Error::NotTree);
    }
    if gamma.len() != t.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: t.vertex_count(),
            got: gamma.len(),
        });
    }
    if t.vertex_count() == 1 {
        return Ok(gamma[0].is_zero().then(Vec::new));
    }
    let trace = prune(t)?;
    let mut w = vec![Rat::zero(); t.edge_count()];
    let mut residual: Vec<Rat> = gamma.to_vec();
    let last = trace.levels.len() - 1;
    for level in &trace.levels[..last] {
        for (&v, &e) in level.vertices.iter().zip(&level.edges) {
            let u = t.other_endpoint(e, v);
            w[e] = residual[v].clone();
            residual[u] = &residual[u] - &w[e];
        }
    }
    let ok = match trace.terminal {
        TerminalKind::Edge => {
            let level = &trace.levels[last];
            let e = level.edges[0];
            let (a, b) = t.edge(e);
            w[e] = residual[a].clone();
            residual[a] == residual[b]
        }
        TerminalKind::Star { center } => {
            let level = &trace.levels[last];
            let mut total = Rat::zero();
            for (&v, &e) in level.vertices.iter().zip(&level.edges) {
                w[e] = residual[v].clone();
                total += &w[e];
            }
            residual[center] == total
        }
    };
    Ok(ok.then_some(w))
}

/// Range analysis of the unique all-ones flow on a balanced tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeRangeReport {
    pub p1: usize,
    /// Inclusive interval the theory predicts for every flow value.
    pub predicted: (Rat, Rat),
    /// Sorted distinct values the flow actually takes.
    pub achieved: Vec<Rat>,
    pub flow: FlowAssignment,
}

/// Predicted value interval for a tree with `p1` leaves.
pub fn predicted_tree_interval(p1: usize) -> (Rat, Rat) {
    if p1 >= 4 {
        let half = (p1 / 2) as i64;
        (rat(1 - half), rat(half))
    } else {
        (rat(0), rat(1))
    }
}

/// Computes the flow with target 1 at every vertex, re-derives the
/// level-sign pattern and partial-sum inequalities, and reports the
/// predicted versus achieved value range.
pub fn tree_range_report(t: &Graph) -> Result<TreeRangeReport> {
    let n = t.vertex_count();
    let Some(flow) = tree_unique_flow(t, &ones(n))? else {
        return Err(Error::BalanceViolated);
    };
    let trace = prune(t)?;
    let sizes = trace.level_sizes();
    for (i, level) in trace.levels.iter().enumerate() {
        // Levels are 1-indexed.  First-level edges all carry 1 and
        // second-level edges are never positive; deeper levels have no
        // fixed sign, because a vertex peeled at level >= 3 can have
        // earlier-peeled neighbors from several levels with mixed signs.
        let idx = i + 1;
        for &e in &level.edges {
            let v = &flow[e];
            let ok = match idx {
                1 => v == &rat(1),
                2 => !v.is_positive(),
                _ => true,
            };
            if !ok {
                return Err(Error::Internal(format!(
                    "level {idx} sign pattern violated by value {v}"
                )));
            }
        }
        if idx >= 2 {
            // (-1)^i * sum over E(P_i) >= sum of (-1)^t p_t for t <= i,
            // the bound obtained by unrolling the per-level flow balance.
            let total: Rat = level.edges.iter().map(|&e| flow[e].clone()).sum();
            let signed = if idx % 2 == 0 { total } else { -total };
            let mut bound = 0i64;
            for (t, &size) in sizes.iter().enumerate().take(idx) {
                bound += if t % 2 == 0 { -(size as i64) } else { size as i64 };
            }
            if signed < rat(bound) {
                return Err(Error::Internal(format!(
                    "level {idx} partial-sum bound violated"
                )));
            }
        }
    }
    let mut achieved: Vec<Rat> = flow.to_vec();
    achieved.sort();
    achieved.dedup();
    let predicted = predicted_tree_interval(trace.p1());
    for v in &achieved {
        if v < &predicted.0 || v > &predicted.1 {
            return Err(Error::Internal(format!("value {v} outside predicted range")));
        }
    }
    Ok(TreeRangeReport {
        p1: trace.p1(),
        predicted,
        achieved,
        flow,
    })
}

/// The balanced trees with extremal flow ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalTree {
    /// Double star: lowest flow value (4-n)/2.
    Tmin,
    /// Path of 4 with leaf bundles on both ends: highest value (n-4)/2.
    Tmax,
    /// The third tree attaining (6-n)/2 and (n-6)/2 simultaneously.
    Topt,
    /// Double star with one leaf moved one step out; values {(6-n)/2, 0, 1}.
    S1,
    /// Tmax with one leaf of each bundle moved inward; values {(8-n)/2, 1, (n-8)/2}.
    S2,
}

pub fn make_extremal_tree(kind: ExtremalTree, n: usize) -> Result<Graph> {
    let floor = match kind {
        ExtremalTree::Tmin | ExtremalTree::Tmax => 6,
        _ => 8,
    };
    if n % 2 != 0 || n < floor {
        return Err(Error::BadParameter(format!(
            "{kind:?} needs even n >= {floor}, got {n}"
        )));
    }
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut next;
    let attach = |edges: &mut Vec<(usize, usize)>, next: &mut usize, hub: usize, k: usize| {
        for _ in 0..k {
            edges.push((hub, *next));
            *next += 1;
        }
    };
    match kind {
        ExtremalTree::Tmin => {
            next = 2;
            edges.push((0, 1));
            attach(&mut edges, &mut next, 0, (n - 2) / 2);
            attach(&mut edges, &mut next, 1, (n - 2) / 2);
        }
        ExtremalTree::Tmax => {
            next = 4;
            edges.extend([(0, 1), (1, 2), (2, 3)]);
            attach(&mut edges, &mut next, 0, (n - 4) / 2);
            attach(&mut edges, &mut next, 3, (n - 4) / 2);
        }
        ExtremalTree::Topt => {
            next = 4;
            edges.extend([(0, 1), (1, 2), (2, 3)]);
            attach(&mut edges, &mut next, 0, (n - 4) / 2);
            attach(&mut edges, &mut next, 3, (n - 6) / 2);
            attach(&mut edges, &mut next, 1, 1);
        }
        ExtremalTree::S1 => {
            // 0 - 1 double star, with one of 0's leaves pushed out to
            // distance two (2 carrying the pendant 3).
            next = 4;
            edges.extend([(0, 1), (0, 2), (2, 3)]);
            attach(&mut edges, &mut next, 0, (n - 4) / 2);
            attach(&mut edges, &mut next, 1, (n - 4) / 2);
        }
        ExtremalTree::S2 => {
            next = 4;
            edges.extend([(0, 1), (1, 2), (2, 3)]);
            attach(&mut edges, &mut next, 0, (n - 6) / 2);
            attach(&mut edges, &mut next, 3, (n - 6) / 2);
            attach(&mut edges, &mut next, 1, 1);
            attach(&mut edges, &mut next, 2, 1);
        }
    }
    debug_assert_eq!(next, n);
    Graph::new(n, &edges)
}

/// Which structural case of the unicyclic analysis applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnicyclicCase {
    /// No leaves: the graph is its cycle; all values 1/2.
    Cycle,
    /// One leaf: values within [0, 1].
    SingleLeaf,
    /// p >= 2 leaves, odd cycle: values within [1-p, p].
    NonBipartite { p: usize },
    /// p >= 2 leaves, balanced bipartite: values within the halved range.
    Balanced { p: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicyclicReport {
    pub flow: FlowAssignment,
    pub case: UnicyclicCase,
    /// Inclusive value range the case guarantees.
    pub interval: (Rat, Rat),
}

/// All-ones-sum flow on a connected unicyclic graph, by the constructive
/// case recursion; `None` exactly when the graph is bipartite and
/// unbalanced.
pub fn unicyclic_flow(g: &Graph) -> Result<Option<UnicyclicReport>> {
    if !g.is_unicyclic() {
        return Err(Error::NotUnicyclic);
    }
    if let Some(side) = g.try_two_color() {
        let ones_count = side.iter().filter(|&&s| s == 1).count();
        if 2 * ones_count != g.vertex_count() {
            return Ok(None);
        }
    }
    let p = (0..g.vertex_count()).filter(|&v| g.degree(v) == 1).count();
    let case = if p == 0 {
        UnicyclicCase::Cycle
    } else if p == 1 {
        UnicyclicCase::SingleLeaf
    } else if g.is_bipartite() {
        UnicyclicCase::Balanced { p }
    } else {
        UnicyclicCase::NonBipartite { p }
    };
    let interval = match case {
        UnicyclicCase::Cycle => (ratio(1, 2), ratio(1, 2)),
        UnicyclicCase::SingleLeaf => (rat(0), rat(1)),
        UnicyclicCase::NonBipartite { p } => (rat(1 - p as i64), rat(p as i64)),
        UnicyclicCase::Balanced { p } => {
            // Even leaf counts allow the floor bound; for odd p the
            // forced tree values can reach (1-p)/2, so the guarantee is
            // a half-integer wider on both sides.
            if p % 2 == 0 {
                let half = (p / 2) as i64;
                (rat(1 - half), rat(half))
            } else {
                (ratio(1 - p as i64, 2), ratio(1 + p as i64, 2))
            }
        }
    };
    let mut flow = unicyclic_rec(g)?;
    if g.is_bipartite() {
        normalize_on_cycle(g, &mut flow, &interval)?;
    }
    if vertex_values(g, &flow)? != ones(g.vertex_count()) {
        return Err(Error::Internal("unicyclic construction broke vertex sums".into()));
    }
    Ok(Some(UnicyclicReport {
        flow,
        case,
        interval,
    }))
}

/// On a bipartite unicyclic graph the flows with fixed vertex sums form
/// a line: flow + t * (alternating +-1 around the even cycle).  Tree
/// edge values are forced, but the cycle values can be slid to fit the
/// target interval; the recursion's raw output may need that slide when
/// a correction walk crossed the cycle.
fn normalize_on_cycle(g: &Graph, flow: &mut [Rat], interval: &(Rat, Rat)) -> Result<()> {
    // Peel leaves; the surviving edges are the cycle.
    let mut deg = g.degrees();
    let mut queue: Vec<usize> = (0..g.vertex_count()).filter(|&v| deg[v] == 1).collect();
    let mut alive = vec![true; g.edge_count()];
    while let Some(v) = queue.pop() {
        if deg[v] != 1 {
            continue;
        }
        let &(u, e) = g
            .adjacency(v)
            .iter()
            .find(|&&(_, e)| alive[e])
            .expect("pendant vertex has an alive edge");
        alive[e] = false;
        deg[v] = 0;
        deg[u] -= 1;
        if deg[u] == 1 {
            queue.push(u);
        }
    }
    // Walk the cycle assigning alternating kernel signs.
    let cycle: Vec<usize> = (0..g.edge_count()).filter(|&e| alive[e]).collect();
    let start = g.edge(cycle[0]).0;
    let mut sign = vec![0i32; g.edge_count()];
    let (mut at, mut prev, mut s) = (start, usize::MAX, 1i32);
    for _ in 0..cycle.len() {
        let &(nxt, e) = g
            .adjacency(at)
            .iter()
            .find(|&&(_, e)| alive[e] && e != prev)
            .expect("cycle walk continues");
        sign[e] = s;
        s = -s;
        prev = e;
        at = nxt;
    }
    // Intersect the per-edge constraints lo <= flow[e] + sign[e]*t <= hi.
    let (lo, hi) = interval;
    let (mut tlo, mut thi): (Option<Rat>, Option<Rat>) = (None, None);
    for &e in &cycle {
        let (a, b) = match sign[e] {
            1 => (lo - &flow[e], hi - &flow[e]),
            _ => (&flow[e] - hi, &flow[e] - lo),
        };
        if tlo.as_ref().is_none_or(|t| *t < a) {
            tlo = Some(a);
        }
        if thi.as_ref().is_none_or(|t| *t > b) {
            thi = Some(b);
        }
    }
    let (tlo, thi) = (tlo.unwrap(), thi.unwrap());
    if tlo > thi {
        return Err(Error::Internal("no cycle shift fits the case interval".into()));
    }
    let t = if tlo <= Rat::zero() && Rat::zero() <= thi {
        Rat::zero()
    } else if thi < Rat::zero() {
        thi
    } else {
        tlo
    };
    if !t.is_zero() {
        for &e in &cycle {
            flow[e] = &flow[e] + rat(sign[e] as i64) * &t;
        }
    }
    Ok(())
}

fn unicyclic_rec(g: &Graph) -> Result<FlowAssignment> {
    let n = g.vertex_count();
    let leaves: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
    if leaves.is_empty() {
        return Ok(vec![ratio(1, 2); g.edge_count()]);
    }
    if leaves.len() == 1 {
        return single_leaf_flow(g);
    }
    // Degree-2 shortcut: hang the leaf edge with weight 1, cut the chain.
    if let Some((u, w)) = leaves.iter().find_map(|&u| {
        let w = g.adjacency(u)[0].0;
        (g.degree(w) == 2).then_some((u, w))
    }) {
        let wprime = g
            .adjacency(w)
            .iter()
            .map(|&(x, _)| x)
            .find(|&x| x != u)
            .expect("degree-2 vertex has a second neighbor");
        let (sub, old_of) = g.delete_vertices(&[u, w]);
        let inner = unicyclic_rec(&sub)?;
        let mut flow = lift_flow(g, &sub, &old_of, &inner);
        flow[g.edge_index(u, w).unwrap()] = rat(1);
        flow[g.edge_index(w, wprime).unwrap()] = rat(0);
        return Ok(flow);
    }
    // Leaf-pair elimination: weight 1 on both pendant edges, then an
    // alternating +-1 correction along an odd walk between the leaves.
    let u = leaves[0];
    let v = match g.try_two_color() {
        Some(side) => *leaves
            .iter()
            .find(|&&x| side[x] != side[u])
            .ok_or_else(|| Error::Internal("balanced graph with one-sided leaves".into()))?,
        None => leaves[1],
    };
    let (sub, old_of) = g.delete_vertices(&[u, v]);
    let inner = unicyclic_rec(&sub)?;
    let mut flow = lift_flow(g, &sub, &old_of, &inner);
    let walk = odd_walk(g, u, v).ok_or_else(|| Error::Internal("no odd walk found".into()))?;
    for (i, &e) in walk.iter().enumerate() {
        if i % 2 == 0 {
            flow[e] = &flow[e] + rat(1);
        } else {
            flow[e] = &flow[e] - rat(1);
        }
    }
    Ok(flow)
}

fn lift_flow(g: &Graph, sub: &Graph, old_of: &[usize], inner: &[Rat]) -> FlowAssignment {
    let mut flow = vec![Rat::zero(); g.edge_count()];
    for (e, &(a, b)) in sub.edges().iter().enumerate() {
        let host = g
            .edge_index(old_of[a], old_of[b])
            .expect("subgraph edge present in host");
        flow[host] = inner[e].clone();
    }
    flow
}

/// Shortest odd-length walk between two vertices, as an edge sequence,
/// by searching over (vertex, parity) states; edges may repeat.
fn odd_walk(g: &Graph, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<[Option<(usize, usize)>; 2]> = vec![[None; 2]; n];
    let mut seen = vec![[false; 2]; n];
    seen[from][0] = true;
    let mut queue = std::collections::VecDeque::from([(from, 0usize)]);
    while let Some((x, par)) = queue.pop_front() {
        if x == to && par == 1 {
            let mut edges = Vec::new();
            let (mut x, mut par) = (x, par);
            while (x, par) != (from, 0) {
                let (px, e) = parent[x][par].unwrap();
                edges.push(e);
                x = px;
                par ^= 1;
            }
            edges.reverse();
            return Some(edges);
        }
        for &(y, e) in g.adjacency(x) {
            if !seen[y][par ^ 1] {
                seen[y][par ^ 1] = true;
                parent[y][par ^ 1] = Some((x, e));
                queue.push_back((y, par ^ 1));
            }
        }
    }
    None
}

/// The one-leaf case: the pendant path's flow is forced to alternate
/// between 1 and 0; the cycle absorbs the remainder.
fn single_leaf_flow(g: &Graph) -> Result<FlowAssignment> {
    let n = g.vertex_count();
    let mut flow = vec![Rat::zero(); g.edge_count()];
    let mut residual = vec![rat(1); n];
    let mut deg = g.degrees();
    let mut edge_alive = vec![true; g.edge_count()];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if deg[v] != 1 {
            continue;
        }
        let &(u, e) = g
            .adjacency(v)
            .iter()
            .find(|&&(_, e)| edge_alive[e])
            .expect("pendant vertex has an alive edge");
        flow[e] = residual[v].clone();
        residual[u] = &residual[u] - &flow[e];
        edge_alive[e] = false;
        deg[v] = 0;
        deg[u] -= 1;
        if deg[u] == 1 {
            stack.push(u);
        }
    }
    // What survives is the cycle, with every residual 1 except possibly
    // the attachment vertex at 0.
    let cycle_edges: Vec<usize> = (0..g.edge_count()).filter(|&e| edge_alive[e]).collect();
    let start = match cycle_edges
        .iter()
        .flat_map(|&e| [g.edge(e).0, g.edge(e).1])
        .find(|&x| residual[x].is_zero())
    {
        None => {
            for &e in &cycle_edges {
                flow[e] = ratio(1, 2);
            }
            return Ok(flow);
        }
        Some(u) => u,
    };
    // Walk the cycle from the zero-residual vertex, alternating 0, 1, ...;
    // the cycle is odd here (the even case is unbalanced and was
    // rejected upstream).
    if cycle_edges.len() % 2 == 0 {
        return Err(Error::Internal("even cycle reached the forced-zero case".into()));
    }
    let mut at = start;
    let mut prev = usize::MAX;
    for i in 0..cycle_edges.len() {
        let &(nxt, e) = g
            .adjacency(at)
            .iter()
            .find(|&&(_, e)| edge_alive[e] && e != prev)
            .expect("cycle walk continues");
        flow[e] = rat((i % 2) as i64);
        edge_alive[e] = false;
        prev = e;
        at = nxt;
    }
    debug_assert_eq!(at, start);
    Ok(flow)
}


/// Odd cycle joined to a star through one of the star's leaves: the
/// extremal family for the non-bipartite unicyclic bound.  With
/// `wide = false` the star is on `p + 2` vertices so the whole graph has
/// `p` leaves; `wide = true` keeps a star on `p + 3` vertices (reading
/// the construction as not spending a leaf), giving `p + 1` leaves.
pub fn unicyclic_case3_extremal(p: usize, wide: bool) -> Result<Graph> {
    if p < 2 {
        return Err(Error::BadParameter("need p >= 2 leaves".into()));
    }
    let star_leaves = if wide { p + 2 } else { p + 1 };
    // 0,1,2 triangle; 3 star center; 4.. star leaves; leaf 4 joins.
    let mut edges = vec![(0usize, 1usize), (1, 2), (0, 2)];
    for i in 0..star_leaves {
        edges.push((3, 4 + i));
    }
    edges.push((2, 4));
    Graph::new(4 + star_leaves, &edges)
}

/// Balanced unicyclic extremal family: two stars whose centers are the
/// ends of a six-vertex path, with a chord turning the middle four path
/// vertices into a 4-cycle.
pub fn unicyclic_case4_extremal(p: usize) -> Result<Graph> {
    if p < 2 || p % 2 != 0 {
        return Err(Error::BadParameter("need even p >= 2".into()));
    }
    // Centers 0 and 7, joined by the path 1-2-3-4-5-6; the chord {2,5}
    // closes the middle four path vertices into a 4-cycle.
    let mut edges: Vec<(usize, usize)> =
        (0..7).map(|i| (i, i + 1)).chain([(2, 5)]).collect();
    let mut next = 8;
    for _ in 0..p / 2 {
        edges.push((0, next));
        next += 1;
    }
    for _ in 0..p / 2 {
        edges.push((7, next));
        next += 1;
    }
    Graph::new(next, &edges)
}
