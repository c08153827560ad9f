//! Brute-force ground truth: exhaustive enumeration of flows over a
//! finite label set, forced-edge analysis of the affine solution set,
//! exhaustive {1,2}-factor enumeration, and an interval-feasibility
//! probe by basic-solution enumeration.  Everything here is independent
//! of the constructive modules so disagreements expose real defects.

use crate::error::{Error, Result};
use crate::factor::Factor;
use crate::flow::{vertex_values, FlowAssignment, GammaVector, IntervalSpec};
use crate::graph::Graph;
use crate::matrix;
use crate::rational::Rat;
use crate::solver;
use num_traits::Zero;

/// Default candidate budget for [`enumerate_finite_flows`].
pub const ENUMERATION_BUDGET: u64 = 100_000_000;

/// Edge cap for [`enumerate_one_two_factors`].
pub const FACTOR_ENUMERATION_EDGE_CAP: usize = 20;

/// Edge cap for [`polytope_feasibility_probe`].
pub const PROBE_EDGE_CAP: usize = 10;

/// Outcome of an exhaustive finite-label enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Every solution, in lexicographic order over (edge index, label
    /// index); truncated to `cap` entries when `count` exceeds it.
    pub solutions: Vec<FlowAssignment>,
    /// Total number of solutions found.
    pub count: u64,
    /// Backtracking nodes visited, against the candidate budget.
    pub nodes_visited: u64,
}

/// All flows with values drawn from `labels` and every vertex sum equal
/// to `c`, by backtracking with partial-sum pruning.  Assigning edges in
/// lexicographic order keeps the output order deterministic; the prune
/// uses, per vertex, the best and worst completion still available.
pub fn enumerate_finite_flows(
    g: &Graph,
    labels: &[Rat],
    c: &Rat,
    cap: usize,
    budget: u64,
) -> Result<EnumerationReport> {
    if labels.is_empty() {
        return Err(Error::BadParameter("empty label set".into()));
    }
    let mut labels = labels.to_vec();
    labels.sort();
    labels.dedup();
    let lo = labels.first().unwrap().clone();
    let hi = labels.last().unwrap().clone();
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut remaining: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    let mut sums = vec![Rat::zero(); n];
    let mut current = vec![Rat::zero(); m];
    let mut report = EnumerationReport {
        solutions: Vec::new(),
        count: 0,
        nodes_visited: 0,
    };
    if m == 0 {
        // The empty assignment is the only candidate.
        if n == 0 || c.is_zero() {
            report.count = 1;
            if cap > 0 {
                report.solutions.push(Vec::new());
            }
        }
        return Ok(report);
    }
    let mut stack: Vec<usize> = vec![0];
    // Explicit index stack: stack[d] is the next label index to try at
    // edge d.  Depth m means a complete assignment.
    let mut depth = 0usize;
    loop {
        if depth == m {
            report.count += 1;
            if report.solutions.len() < cap {
                report.solutions.push(current.clone());
            }
            depth -= 1;
            let e = depth;
            let (u, v) = g.edge(e);
            sums[u] -= &current[e];
            sums[v] -= &current[e];
            remaining[u] += 1;
            remaining[v] += 1;
            continue;
        }
        let e = depth;
        let next = stack[depth];
        if next >= labels.len() {
            stack.pop();
            if depth == 0 {
                break;
            }
            depth -= 1;
            let e = depth;
            let (u, v) = g.edge(e);
            sums[u] -= &current[e];
            sums[v] -= &current[e];
            remaining[u] += 1;
            remaining[v] += 1;
            continue;
        }
        stack[depth] += 1;
        report.nodes_visited += 1;
        if report.nodes_visited > budget {
            return Err(Error::BudgetExceeded);
        }
        let value = labels[next].clone();
        let (u, v) = g.edge(e);
        let admissible = |x: usize| {
            let s = &sums[x] + &value;
            let rem = remaining[x] - 1;
            if rem == 0 {
                &s == c
            } else {
                let reach = crate::rational::rat(rem);
                &s + &hi * &reach >= *c && &s + &lo * &reach <= *c
            }
        };
        if !admissible(u) || !admissible(v) {
            continue;
        }
        sums[u] += &value;
        sums[v] += &value;
        remaining[u] -= 1;
        remaining[v] -= 1;
        current[e] = value;
        depth += 1;
        if stack.len() <= depth {
            stack.push(0);
        } else {
            stack[depth] = 0;
        }
    }
    Ok(report)
}

/// Per-edge forced values of the affine set {omega : vertex sums =
/// gamma}: an edge is forced exactly when every nullspace basis vector
/// vanishes there, and the forced value is read off any solution.
pub fn forced_edge_values(g: &Graph, gamma: &GammaVector) -> Result<Vec<Option<Rat>>> {
    let Some(base) = solver::solve_gamma_flow(g, gamma)? else {
        return Err(Error::BalanceViolated);
    };
    let basis = solver::nullspace(g).vectors;
    Ok((0..g.edge_count())
        .map(|e| {
            if basis.iter().all(|v| v[e].is_zero()) {
                Some(base[e].clone())
            } else {
                None
            }
        })
        .collect())
}

/// All spanning subgraphs whose components are single edges or cycles,
/// i.e. all {1,2}-factors, by subset backtracking with degree pruning.
pub fn enumerate_one_two_factors(g: &Graph, cap: usize) -> Result<Vec<Factor>> {
    if g.edge_count() > FACTOR_ENUMERATION_EDGE_CAP {
        return Err(Error::BudgetExceeded);
    }
    let n = g.vertex_count();
    let _m = g.edge_count();
    let mut chosen: Vec<usize> = Vec::new();
    let mut degree = vec![0usize; n];
    let mut found = Vec::new();
    // Recursive include/exclude over edges; a vertex with all later
    // incident edges decided must already have degree 1 or 2.
    fn rec(
        g: &Graph,
        e: usize,
        degree: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        found: &mut Vec<Factor>,
        cap: usize,
    ) -> Result<()> {
        if found.len() > cap {
            return Err(Error::BudgetExceeded);
        }
        if e == g.edge_count() {
            if degree.iter().all(|&d| d == 1 || d == 2) {
                let f = Factor::from_edges(g, chosen.clone());
                if factor_components_valid(g, &f) {
                    found.push(f);
                }
            }
            return Ok(());
        }
        let (u, v) = g.edge(e);
        // Include the edge.
        if degree[u] < 2 && degree[v] < 2 {
            degree[u] += 1;
            degree[v] += 1;
            chosen.push(e);
            rec(g, e + 1, degree, chosen, found, cap)?;
            chosen.pop();
            degree[u] -= 1;
            degree[v] -= 1;
        }
        // Exclude it, unless that strands an endpoint at degree 0.
        let last_chance_u = degree[u] == 0 && g.adjacency(u).iter().all(|&(_, f)| f <= e);
        let last_chance_v = degree[v] == 0 && g.adjacency(v).iter().all(|&(_, f)| f <= e);
        if !last_chance_u && !last_chance_v {
            rec(g, e + 1, degree, chosen, found, cap)?;
        }
        Ok(())
    }
    rec(g, 0, &mut degree, &mut chosen, &mut found, cap)?;
    Ok(found)
}

/// Components of a degree-{1,2} spanning subgraph are single edges or
/// cycles exactly when no component is a longer path: every degree-1
/// vertex must be matched to another degree-1 vertex by its own edge.
fn factor_components_valid(g: &Graph, f: &Factor) -> bool {
    f.edges.iter().all(|&e| {
        let (u, v) = g.edge(e);
        (f.degrees[u] == 1) == (f.degrees[v] == 1)
    })
}

/// Independent feasibility check for {omega : vertex sums = gamma,
/// omega in [lo, hi]^E}: the polytope, if nonempty, has a basic point
/// with the non-basic coordinates pinned to interval endpoints, so
/// exhausting column bases and endpoint patterns decides feasibility.
pub fn polytope_feasibility_probe(
    g: &Graph,
    gamma: &GammaVector,
    set: &IntervalSpec,
) -> Result<bool> {
    let m = g.edge_count();
    if m > PROBE_EDGE_CAP {
        return Err(Error::BudgetExceeded);
    }
    let (Some(lo), Some(hi)) = (&set.lo, &set.hi) else {
        return Err(Error::BadParameter("probe needs a closed interval".into()));
    };
    if !set.is_closed() {
        return Err(Error::BadParameter("probe needs a closed interval".into()));
    }
    if lo > hi {
        return Ok(false);
    }
    let rows = matrix::incidence_rat(g);
    let r = matrix::rank(matrix::incidence_rows(g));
    let mut basic = vec![false; m];
    probe_bases(g, &rows, gamma, lo, hi, &mut basic, 0, r, m)
}

#[allow(clippy::too_many_arguments)]
fn probe_bases(
    g: &Graph,
    rows: &[Vec<Rat>],
    gamma: &GammaVector,
    lo: &Rat,
    hi: &Rat,
    basic: &mut Vec<bool>,
    from: usize,
    want: usize,
    m: usize,
) -> Result<bool> {
    if want == 0 {
        return probe_one_basis(g, rows, gamma, lo, hi, basic);
    }
    if m - from < want {
        return Ok(false);
    }
    for e in from..m {
        basic[e] = true;
        if probe_bases(g, rows, gamma, lo, hi, basic, e + 1, want - 1, m)? {
            basic[e] = false;
            return Ok(true);
        }
        basic[e] = false;
    }
    Ok(false)
}

fn probe_one_basis(
    g: &Graph,
    rows: &[Vec<Rat>],
    gamma: &GammaVector,
    lo: &Rat,
    hi: &Rat,
    basic: &[bool],
) -> Result<bool> {
    let free: Vec<usize> = (0..g.edge_count()).filter(|&e| basic[e]).collect();
    let pinned: Vec<usize> = (0..g.edge_count()).filter(|&e| !basic[e]).collect();
    let cols: Vec<Vec<Rat>> = rows
        .iter()
        .map(|row| free.iter().map(|&e| row[e].clone()).collect())
        .collect();
    // Try every endpoint pattern on the pinned coordinates.
    for mask in 0u32..(1u32 << pinned.len()) {
        let mut rhs = gamma.clone();
        for (i, &e) in pinned.iter().enumerate() {
            let v = if mask >> i & 1 == 0 { lo } else { hi };
            for (row, b) in rhs.iter_mut().zip(rows) {
                *row -= &b[e] * v;
            }
        }
        let Some(x) = matrix::solve_dense(&cols, &rhs) else {
            continue;
        };
        if x.iter().all(|v| v >= lo && v <= hi) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Re-verification hook used by tests: every emitted solution must
/// reproduce the target sums exactly.
pub fn verify_enumeration(g: &Graph, report: &EnumerationReport, c: &Rat) -> Result<()> {
    for w in &report.solutions {
        let sums = vertex_values(g, w)?;
        if sums.iter().any(|s| s != c) {
            return Err(Error::Internal("enumerated flow fails re-verification".into()));
        }
    }
    Ok(())
}
