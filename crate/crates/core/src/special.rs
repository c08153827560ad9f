//! Named flow constructions: {0, 1/2, 1} and strictly positive flows via
//! factors, {-1, 0, 1} flows on regular graphs through double-cover
//! factorizations, 1-sum and 0-sum 3-flows on odd-regular graphs,
//! nowhere-zero 1-sum flows on balanced bipartite graphs, and the
//! k-factor / spanning-tree range reductions.

use crate::error::{Error, Result};
use crate::factor::{
    self, euler_split, one_two_factor, perfect_matching, two_factorization, Factor, FactorKind,
    COMPONENT_FACTOR_CAP,
};
use crate::flow::{ones, FlowAssignment, FlowResult, IntervalSpec, LabelSet};
use crate::graph::Graph;
use crate::matching::bipartite_max_matching;
use crate::rational::{rat, ratio, Rat};
use crate::solver;
use crate::tree;
use num_traits::Zero;

/// Flow with all vertex sums 1 and values in {0, 1/2, 1}: the indicator
/// of a perfect matching for bipartite graphs, or a {1,2}-factor with 1
/// on its single edges and 1/2 on its cycles otherwise.  `None` exactly
/// when the needed factor does not exist.
pub fn one_zero_one_flow(g: &Graph) -> Result<Option<FlowResult>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let labels = LabelSet::finite(vec![rat(0), ratio(1, 2), rat(1)]);
    if g.is_bipartite() {
        let Some(m) = perfect_matching(g) else {
            return Ok(None);
        };
        let mut w = vec![Rat::zero(); g.edge_count()];
        for &e in &m.edges {
            w[e] = rat(1);
        }
        return FlowResult::checked(g, w, labels, &ones(g.vertex_count()), "matching indicator")
            .map(Some);
    }
    let Some(f) = one_two_factor(g) else {
        return Ok(None);
    };
    FlowResult::checked(
        g,
        one_two_factor_flow(g, &f),
        labels,
        &ones(g.vertex_count()),
        "one-two factor flow",
    )
    .map(Some)
}

/// 1 on the single-edge components of a {1,2}-factor, 1/2 on its cycles.
fn one_two_factor_flow(g: &Graph, f: &Factor) -> FlowAssignment {
    let mut w = vec![Rat::zero(); g.edge_count()];
    for &e in &f.edges {
        let (u, v) = g.edge(e);
        w[e] = if f.degrees[u] == 1 && f.degrees[v] == 1 {
            rat(1)
        } else {
            ratio(1, 2)
        };
    }
    w
}

/// Edge budget above which [`one_positive_flow`] skips the averaging
/// witness (the decision is still returned).
pub const WITNESS_EDGE_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveFlowReport {
    /// Whether every edge lies in some factor, i.e. a flow with all
    /// values in (0, 1] exists.
    pub exists: bool,
    /// Average of one witness factor flow per edge; absent when the
    /// decision is negative or the edge count exceeds the cap.
    pub witness: Option<FlowResult>,
}

/// Decides whether the graph has a flow with vertex sums 1 and values in
/// (0, 1], and constructs one by averaging per-edge witness factors.
pub fn one_positive_flow(g: &Graph, witness_cap: usize) -> Result<PositiveFlowReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let kind = if g.is_bipartite() {
        FactorKind::PerfectMatching
    } else {
        FactorKind::OneTwoFactor
    };
    let exists = (0..g.edge_count()).all(|e| factor::edge_in_some_factor(g, e, kind));
    if !exists || g.edge_count() > witness_cap {
        return Ok(PositiveFlowReport {
            exists,
            witness: None,
        });
    }
    let m = g.edge_count();
    let mut total = vec![Rat::zero(); m];
    for e in 0..m {
        let part = match kind {
            FactorKind::PerfectMatching => {
                let mut w = witness_matching_through(g, e)?;
                w[e] = rat(1);
                w
            }
            FactorKind::OneTwoFactor => witness_cover_through(g, e)?,
        };
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    let scale = ratio(1, m as i64);
    let flow: FlowAssignment = total.into_iter().map(|v| v * &scale).collect();
    let labels = LabelSet::PuncturedInterval(IntervalSpec::closed(rat(0), rat(1))?);
    let witness = FlowResult::checked(
        g,
        flow,
        labels,
        &ones(g.vertex_count()),
        "averaged factor flows",
    )?;
    Ok(PositiveFlowReport {
        exists,
        witness: Some(witness),
    })
}

/// Indicator flow of a perfect matching forced through edge `e` (the
/// value on `e` itself is left for the caller to set).
fn witness_matching_through(g: &Graph, e: usize) -> Result<FlowAssignment> {
    let (u, v) = g.edge(e);
    let (sub, old_of) = g.delete_vertices(&[u, v]);
    let Some(m) = perfect_matching(&sub) else {
        return Err(Error::Internal("witness matching vanished".into()));
    };
    let mut w = vec![Rat::zero(); g.edge_count()];
    for &se in &m.edges {
        let (a, b) = sub.edge(se);
        let host = g
            .edge_index(old_of[a], old_of[b])
            .expect("matching edge present in host");
        w[host] = rat(1);
    }
    Ok(w)
}

/// Flow of a {1,2}-factor forced through edge `e`, obtained by pinning
/// one double-cover copy of `e` into a bipartite perfect matching and
/// folding the two copies of each edge back to a weight in {1/2, 1}.
fn witness_cover_through(g: &Graph, e: usize) -> Result<FlowAssignment> {
    let (cover, back) = g.bipartite_double_cover();
    let pinned = back[e].0;
    let (pu, pv) = cover.edge(pinned);
    let (sub, old_of) = cover.delete_vertices(&[pu, pv]);
    let mate = bipartite_max_matching(&sub)?;
    let mut chosen = vec![false; cover.edge_count()];
    chosen[pinned] = true;
    let mut matched = 0usize;
    for (a, m) in mate.iter().enumerate() {
        if let Some(b) = *m {
            if a < b {
                matched += 1;
                chosen[cover
                    .edge_index(old_of[a], old_of[b])
                    .expect("matched edge present in cover")] = true;
            }
        }
    }
    if 2 * (matched + 1) != cover.vertex_count() {
        return Err(Error::Internal("witness cover matching vanished".into()));
    }
    let half = ratio(1, 2);
    Ok((0..g.edge_count())
        .map(|f| {
            let (f1, f2) = back[f];
            let hits = chosen[f1] as i64 + chosen[f2] as i64;
            rat(hits) * &half
        })
        .collect())
}

/// {-1, 0, 1} flow with vertex sums 1 on a connected k-regular graph
/// with k odd: the bipartite double cover is 1-factorized, the factors
/// alternately weighted +-1/2, and each edge's two copies are summed.
pub fn pm1_flow_odd_regular(g: &Graph) -> Result<FlowResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if k % 2 == 0 {
        return Err(Error::BadParameter(format!("degree {k} is even")));
    }
    pm1_odd_core(g)
}

/// The double-cover folding itself, without a connectivity requirement
/// (the mod-4 construction applies it to a possibly disconnected half).
fn pm1_odd_core(g: &Graph) -> Result<FlowResult> {
    let flow = pm1_fold(g)?;
    FlowResult::checked(
        g,
        flow,
        LabelSet::finite(vec![rat(-1), rat(0), rat(1)]),
        &ones(g.vertex_count()),
        "double-cover factor folding",
    )
}

fn pm1_fold(g: &Graph) -> Result<FlowAssignment> {
    let (cover, back) = g.bipartite_double_cover();
    let factors = factor::one_factorization_bipartite(&cover)?;
    let half = ratio(1, 2);
    let mut cover_val = vec![Rat::zero(); cover.edge_count()];
    for (i, f) in factors.factors.iter().enumerate() {
        let v = if i % 2 == 0 { half.clone() } else { -half.clone() };
        for &e in &f.edges {
            cover_val[e] = v.clone();
        }
    }
    Ok((0..g.edge_count())
        .map(|e| {
            let (e1, e2) = back[e];
            &cover_val[e1] + &cover_val[e2]
        })
        .collect())
}

/// {-1, 0, 1} flow with vertex sums 1 on a connected k-regular graph of
/// even order with k = 2 mod 4: Euler-split into two (k/2)-regular
/// halves (k/2 odd), fold one half, zero the other.
pub fn pm1_flow_mod4_regular(g: &Graph) -> Result<FlowResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let k = g.regularity().ok_or(Error::NotRegular)?;
    if k % 4 != 2 {
        return Err(Error::BadParameter(format!("degree {k} is not 2 mod 4")));
    }
    if g.vertex_count() % 2 != 0 {
        return Err(Error::BadParameter("odd vertex count".into()));
    }
    let (first, _) = euler_split(g)?;
    let (half_graph, edge_back) = g.edge_subgraph(&first);
    let half_flow = pm1_fold(&half_graph)?;
    let mut flow = vec![Rat::zero(); g.edge_count()];
    for (se, v) in half_flow.into_iter().enumerate() {
        flow[edge_back[se]] = v;
    }
    FlowResult::checked(
        g,
        flow,
        LabelSet::finite(vec![rat(-1), rat(0), rat(1)]),
        &ones(g.vertex_count()),
        "euler-split folding",
    )
}

/// Nowhere-zero flow with vertex sums 1 and values in {-2, -1, 1, 2} on
/// an r-regular graph, r odd >= 5, built from a factor with regular
/// components of two consecutive degrees.
pub fn one_sum_3flow(g: &Graph) -> Result<FlowResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = g.regularity().ok_or(Error::NotRegular)?;
    if r % 2 == 0 || r < 5 {
        return Err(Error::BadParameter(format!("degree {r} is not odd >= 5")));
    }
    let labels = LabelSet::finite(vec![rat(-2), rat(-1), rat(1), rat(2)]);
    let target = ones(g.vertex_count());
    if r == 5 {
        // Factor with 2- and 3-regular components: -1 outside it, 1 on
        // the cubic components, 2 on the cycle components.
        let f = expected_factor(factor::regular_component_factor(g, 3, COMPONENT_FACTOR_CAP))?;
        let mut flow = vec![rat(-1); g.edge_count()];
        for &e in &f.edges {
            let (u, _) = g.edge(e);
            flow[e] = if f.degrees[u] == 3 { rat(1) } else { rat(2) };
        }
        return FlowResult::checked(g, flow, labels, &target, "2/3-factor assignment");
    }
    let t = (r - 1) / 2;
    let f = expected_factor(factor::regular_component_factor(
        g,
        t + 1,
        COMPONENT_FACTOR_CAP,
    ))?;
    // Split the factor into its t-regular part H and (t+1)-regular part K.
    let h_edges: Vec<usize> = f
        .edges
        .iter()
        .copied()
        .filter(|&e| f.degrees[g.edge(e).0] == t)
        .collect();
    let k_edges: Vec<usize> = f
        .edges
        .iter()
        .copied()
        .filter(|&e| f.degrees[g.edge(e).0] == t + 1)
        .collect();
    let mut flow;
    if t % 2 == 1 {
        // t odd: 1 outside the factor, -1 on H; inside K peel a
        // 4-regular part made of two 2-factors, weighted 1 and -2, and
        // put -1 on the rest of K.
        flow = vec![rat(1); g.edge_count()];
        for &e in &h_edges {
            flow[e] = rat(-1);
        }
        let (k_graph, k_back) = g.edge_subgraph(&k_edges);
        let two_factors = two_factorization(&k_graph)?;
        for &e in &k_edges {
            flow[e] = rat(-1);
        }
        for (i, tf) in two_factors.factors.iter().take(2).enumerate() {
            let v = if i == 0 { rat(1) } else { rat(-2) };
            for &se in &tf.edges {
                flow[k_back[se]] = v.clone();
            }
        }
    } else {
        // t even: -1 outside the factor, 1 on K; inside H one 2-factor
        // gets 2 and the rest of H gets 1.
        flow = vec![rat(-1); g.edge_count()];
        for &e in &k_edges {
            flow[e] = rat(1);
        }
        for &e in &h_edges {
            flow[e] = rat(1);
        }
        let (h_graph, h_back) = g.edge_subgraph(&h_edges);
        let two_factors = two_factorization(&h_graph)?;
        for &se in &two_factors.factors[0].edges {
            flow[h_back[se]] = rat(2);
        }
    }
    FlowResult::checked(g, flow, labels, &target, "consecutive-degree factor assignment")
}

/// Nowhere-zero flow with vertex sums 0 and values in {-2, -1, 1, 2} on
/// a 2-edge-connected r-regular graph, r odd >= 3 and r != 5 (the r = 5
/// case is an open conjecture and is rejected as such).
pub fn zero_sum_3flow(g: &Graph) -> Result<FlowResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = g.regularity().ok_or(Error::NotRegular)?;
    if r % 2 == 0 || r < 3 {
        return Err(Error::BadParameter(format!("degree {r} is not odd >= 3")));
    }
    if r == 5 {
        return Err(Error::Conjecture);
    }
    if !g.bridges().is_empty() {
        return Err(Error::BadParameter("graph has a cut edge".into()));
    }
    let labels = LabelSet::finite(vec![rat(-2), rat(-1), rat(1), rat(2)]);
    let zero_target = vec![Rat::zero(); g.vertex_count()];
    let t = r / 3;
    let f = expected_factor(factor::f_factor(g, &vec![r - 2 * t; g.vertex_count()]))?;
    // The factor degree is t, t+1 or t+2 according to r mod 3; it always
    // carries 2, and its 2t-regular complement carries -1 except for a
    // 4-regular part (two 2-factors of the complement) carrying -2 when
    // r is not divisible by 3.
    let mut flow = vec![rat(-1); g.edge_count()];
    for &e in &f.edges {
        flow[e] = rat(2);
    }
    let heavy = match r % 3 {
        0 => 0,
        1 => 1,
        _ => 2,
    };
    if heavy > 0 {
        let complement: Vec<usize> = (0..g.edge_count())
            .filter(|&e| !f.edges.contains(&e))
            .collect();
        let (c_graph, c_back) = g.edge_subgraph(&complement);
        let two_factors = two_factorization(&c_graph)?;
        for tf in two_factors.factors.iter().take(heavy) {
            for &se in &tf.edges {
                flow[c_back[se]] = rat(-2);
            }
        }
    }
    FlowResult::checked(g, flow, labels, &zero_target, "factor-complement assignment")
}

fn expected_factor(found: Result<Option<Factor>>) -> Result<Factor> {
    found?.ok_or_else(|| Error::Internal("a factor the theory guarantees was not found".into()))
}

/// Nowhere-zero flow with vertex sums 1 on a connected balanced
/// bipartite graph, or `None` exactly when some cut edge separates a
/// balanced component (which forces that edge to 0).  `integral`
/// restricts the flow to nonzero integers.
pub fn nowhere_zero_one_sum(g: &Graph, integral: bool) -> Result<Option<FlowResult>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let side = g.try_two_color().ok_or(Error::NotBipartite)?;
    let n = g.vertex_count();
    if 2 * side.iter().filter(|&&s| s == 1).count() != n {
        return Err(Error::BalanceViolated);
    }
    // Decision: a cut edge whose removal leaves a balanced bipartite
    // component forces that edge's value to 0 in every flow.
    for &b in &g.bridges() {
        let keep: Vec<usize> = (0..g.edge_count()).filter(|&e| e != b).collect();
        let (cut, _) = g.edge_subgraph(&keep);
        let comp = cut.components();
        let pieces = 1 + comp.iter().copied().max().unwrap_or(0);
        let mut diff = vec![0i64; pieces];
        for v in 0..n {
            diff[comp[v]] += if side[v] == 1 { 1 } else { -1 };
        }
        if diff.iter().any(|&d| d == 0) {
            return Ok(None);
        }
    }
    let omega = solver::solve_integer_bipartite(g, &ones(n))?;
    let basis = solver::nullspace(g).vectors;
    let free: Vec<usize> = (0..g.edge_count())
        .filter(|&e| basis.iter().any(|v| !v[e].is_zero()))
        .collect();
    for e in 0..g.edge_count() {
        if !free.contains(&e) && omega[e].is_zero() {
            return Err(Error::Internal(
                "forced zero edge escaped the cut-edge criterion".into(),
            ));
        }
    }
    let labels = if integral {
        LabelSet::NonzeroIntegers
    } else {
        LabelSet::NonzeroReals
    };
    if free.is_empty() {
        return FlowResult::checked(g, omega, labels, &ones(n), "forced tree flow").map(Some);
    }
    // Combine the integer kernel basis with geometrically growing
    // coefficients until all free coordinates are nonzero, then pick the
    // smallest scalar that keeps every free coordinate away from 0.
    let alpha = generic_kernel_vector(&basis, &free);
    let bad: Vec<Rat> = free.iter().map(|&e| -&omega[e] / &alpha[e]).collect();
    let mut a = if integral { rat(1) } else { ratio(1, 2) };
    let step = a.clone();
    while bad.contains(&a) {
        a += &step;
    }
    let flow: FlowAssignment = omega
        .iter()
        .zip(&alpha)
        .map(|(w, al)| w + &a * al)
        .collect();
    FlowResult::checked(g, flow, labels, &ones(n), "kernel perturbation").map(Some)
}

fn generic_kernel_vector(basis: &[Vec<Rat>], free: &[usize]) -> Vec<Rat> {
    let m = basis[0].len();
    let largest = basis
        .iter()
        .flat_map(|v| v.iter())
        .map(|x| x.numer().magnitude().clone())
        .max()
        .unwrap_or_default();
    let mut scale = Rat::from_integer(1.into()) + rat(2) * Rat::from_integer(largest.into());
    loop {
        let mut alpha = vec![Rat::zero(); m];
        let mut coeff = rat(1);
        for v in basis {
            for (a, x) in alpha.iter_mut().zip(v) {
                *a += &coeff * x;
            }
            coeff *= &scale;
        }
        if free.iter().all(|&e| !alpha[e].is_zero()) {
            return alpha;
        }
        scale += rat(1);
    }
}

/// 1/k on a k-regular spanning subgraph, 0 elsewhere; `None` when no
/// such subgraph exists.
pub fn kfactor_scaled_flow(g: &Graph, k: usize) -> Result<Option<FlowResult>> {
    if k == 0 {
        return Err(Error::BadParameter("k must be positive".into()));
    }
    let Some(f) = factor::f_factor(g, &vec![k; g.vertex_count()])? else {
        return Ok(None);
    };
    let mut flow = vec![Rat::zero(); g.edge_count()];
    let v = ratio(1, k as i64);
    for &e in &f.edges {
        flow[e] = v.clone();
    }
    let labels = LabelSet::finite(vec![rat(0), v]);
    FlowResult::checked(g, flow, labels, &ones(g.vertex_count()), "scaled factor").map(Some)
}

/// Average of the unique flows of edge-disjoint spanning trees, each
/// extended by zero; `None` if any tree is unbalanced.  Disjointness
/// divides every per-tree value by the number of trees.
pub fn averaged_tree_flow(g: &Graph, trees: &[Vec<usize>]) -> Result<Option<FlowResult>> {
    if trees.is_empty() {
        return Err(Error::BadParameter("no trees given".into()));
    }
    let n = g.vertex_count();
    let mut used = vec![false; g.edge_count()];
    for edges in trees {
        for &e in edges {
            if e >= g.edge_count() {
                return Err(Error::BadParameter(format!("edge index {e} out of range")));
            }
            if used[e] {
                return Err(Error::BadParameter("trees share an edge".into()));
            }
            used[e] = true;
        }
    }
    let mut total = vec![Rat::zero(); g.edge_count()];
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for edges in trees {
        let (sub, edge_back) = g.edge_subgraph(edges);
        if !sub.is_tree() {
            return Err(Error::NotTree);
        }
        let Some(w) = tree::tree_unique_flow(&sub, &ones(n))? else {
            return Ok(None);
        };
        for (se, v) in w.into_iter().enumerate() {
            if v < lo {
                lo = v.clone();
            }
            if v > hi {
                hi = v.clone();
            }
            total[edge_back[se]] += v;
        }
    }
    let scale = ratio(1, trees.len() as i64);
    let flow: FlowAssignment = total.into_iter().map(|v| v * &scale).collect();
    let window = IntervalSpec::closed(lo * &scale, hi * &scale)?;
    FlowResult::checked(
        g,
        flow,
        LabelSet::Interval(window),
        &ones(n),
        "averaged spanning-tree flows",
    )
    .map(Some)
}

/// Flow with vertex sums 1 on any connected graph that has one, with the
/// value window the sparse-support construction guarantees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeFlowReport {
    pub result: FlowResult,
    /// [2 - n/2, n/2 - 2] for balanced bipartite graphs with n >= 8,
    /// [5 - n, n - 5] for non-bipartite graphs with n >= 6; absent for
    /// smaller graphs, where no window is claimed.
    pub window: Option<(Rat, Rat)>,
    pub within_window: Option<bool>,
}

/// Dispatches on bipartiteness: balanced bipartite graphs get the unique
/// flow of a spanning tree extended by zero; non-bipartite graphs get
/// the half-integer flow supported on a spanning tree plus one odd-cycle
/// edge; bipartite unbalanced graphs have no flow at all.
pub fn general_range_flow(g: &Graph) -> Result<Option<RangeFlowReport>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count() as i64;
    let (flow, window, provenance) = if let Some(side) = g.try_two_color() {
        if 2 * side.iter().filter(|&&s| s == 1).count() != g.vertex_count() {
            return Ok(None);
        }
        let tree_edges = g.spanning_tree()?;
        let (sub, edge_back) = g.edge_subgraph(&tree_edges);
        let w = tree::tree_unique_flow(&sub, &ones(g.vertex_count()))?
            .ok_or_else(|| Error::Internal("balanced graph with unbalanced spanning tree".into()))?;
        let mut flow = vec![Rat::zero(); g.edge_count()];
        for (se, v) in w.into_iter().enumerate() {
            flow[edge_back[se]] = v;
        }
        let window = (n >= 8).then(|| (ratio(4 - n, 2), ratio(n - 4, 2)));
        (flow, window, "spanning-tree flow")
    } else {
        let flow = solver::solve_halfinteger(g, &ones(g.vertex_count()))?;
        let window = (n >= 6).then(|| (rat(5 - n), rat(n - 5)));
        (flow, window, "tree-plus-odd-edge flow")
    };
    let (lo, hi) = flow
        .iter()
        .fold((Rat::zero(), Rat::zero()), |(lo, hi), v| {
            (lo.min(v.clone()), hi.max(v.clone()))
        });
    let within_window = window
        .as_ref()
        .map(|(wlo, whi)| &lo >= wlo && &hi <= whi);
    let result = FlowResult::checked(
        g,
        flow,
        LabelSet::Interval(IntervalSpec::closed(lo, hi)?),
        &ones(g.vertex_count()),
        provenance,
    )?;
    Ok(Some(RangeFlowReport {
        result,
        window,
        within_window,
    }))
}
