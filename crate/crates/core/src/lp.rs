//! Interval-constrained flow feasibility by exact linear programming:
//! solve `A w = gamma` with every edge value in a closed interval, emit
//! either an exact flow or a Farkas-style infeasibility certificate.
//!
//! All interval shapes reduce to the canonical nonnegative shifted system
//! `A w' = rhs`, `0 <= w' <= span`: finite lower bounds shift, a missing
//! lower bound with a finite upper reflects, and the all-reals case is the
//! plain linear system.

use crate::error::{Error, Result};
use crate::flow::{FarkasCertificate, FlowAssignment, GammaVector, IntervalSpec};
use crate::graph::Graph;
use crate::matrix;
use crate::rational::Rat;
use crate::simplex::{self, MinimizeOutcome, SimplexOutcome};
use crate::solver;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(FlowAssignment),
    Infeasible(FarkasCertificate),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonnegOutcome {
    Feasible(FlowAssignment),
    /// `z` has `A^T z >= 0` and `gamma . z < 0`.
    Infeasible { z: Vec<Rat> },
}

/// Inclusive per-edge value range; `None` bounds mean the coordinate is
/// unbounded in that direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRange {
    pub min: Option<Rat>,
    pub max: Option<Rat>,
}

fn degree_vector(g: &Graph) -> Vec<Rat> {
    (0..g.vertex_count())
        .map(|v| Rat::from_integer((g.degree(v) as i64).into()))
        .collect()
}

/// Canonical form of the interval constraint: `A w' = rhs`,
/// `0 <= w' <= span`, with `w = dir * w' + off`.
struct Canonical {
    rhs: Vec<Rat>,
    span: Option<Rat>,
    /// +1 for shift (`w = w' + lo`), -1 for reflection (`w = hi - w'`).
    dir: i32,
    off: Rat,
}

fn canonicalize(g: &Graph, gamma: &GammaVector, set: &IntervalSpec) -> Result<Option<Canonical>> {
    if set.open_low || set.open_high {
        return Err(Error::BadParameter(
            "interval solver handles closed intervals only".into(),
        ));
    }
    if set.is_empty() {
        return Err(Error::BadParameter("empty interval".into()));
    }
    if gamma.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: gamma.len(),
        });
    }
    let d = degree_vector(g);
    Ok(match (&set.lo, &set.hi) {
        (Some(a), hi) => Some(Canonical {
            rhs: (0..g.vertex_count())
                .map(|v| &gamma[v] - &(a * &d[v]))
                .collect(),
            span: hi.as_ref().map(|b| b - a),
            dir: 1,
            off: a.clone(),
        }),
        (None, Some(b)) => Some(Canonical {
            rhs: (0..g.vertex_count())
                .map(|v| &(b * &d[v]) - &gamma[v])
                .collect(),
            span: None,
            dir: -1,
            off: b.clone(),
        }),
        (None, None) => None,
    })
}

/// Decides gamma-L-flow existence for a closed interval L, including the
/// half-open-at-infinity and all-reals shapes.
pub fn interval_flow(g: &Graph, gamma: &GammaVector, set: &IntervalSpec) -> Result<LpOutcome> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let Some(canon) = canonicalize(g, gamma, set)? else {
        // Unconstrained edges: the plain linear system.
        return Ok(match solver::solve_gamma_flow(g, gamma)? {
            Some(w) => LpOutcome::Feasible(w),
            None => LpOutcome::Infeasible(unbalanced_certificate(g, gamma)?),
        });
    };
    let m = g.edge_count();
    let a = matrix::incidence_rat(g);
    let lower = vec![Rat::zero(); m];
    let upper = vec![canon.span.clone(); m];
    match simplex::feasible_point(&a, &canon.rhs, &lower, &upper)? {
        SimplexOutcome::Feasible(x) => {
            let w = x
                .into_iter()
                .map(|v| {
                    if canon.dir > 0 {
                        v + &canon.off
                    } else {
                        &canon.off - &v
                    }
                })
                .collect();
            Ok(LpOutcome::Feasible(w))
        }
        SimplexOutcome::Infeasible { y } => {
            // w_j = max(0, (A^T y)_j); the simplex leaves unbounded
            // columns with nonpositive pairing, so w vanishes there.
            let pair = matrix::incidence_transpose_apply(g, &y);
            let w = pair
                .iter()
                .map(|c| if c.is_positive() { c.clone() } else { Rat::zero() })
                .collect();
            Ok(LpOutcome::Infeasible(FarkasCertificate { z: y, w }))
        }
    }
}

fn unbalanced_certificate(g: &Graph, gamma: &GammaVector) -> Result<FarkasCertificate> {
    match solver::gamma_flow_exists(g, gamma)? {
        solver::GammaFlowDecision::Feasible => {
            Err(Error::Internal("certificate requested on feasible instance".into()))
        }
        solver::GammaFlowDecision::Infeasible { y, imbalance } => {
            let z = if imbalance.is_positive() {
                y
            } else {
                y.into_iter().map(|v| -v).collect()
            };
            Ok(FarkasCertificate {
                z,
                w: vec![Rat::zero(); g.edge_count()],
            })
        }
    }
}

/// Nonnegative flows: `A w = gamma`, `w >= 0`.
pub fn nonnegative_flow(g: &Graph, gamma: &GammaVector) -> Result<NonnegOutcome> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if gamma.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: gamma.len(),
        });
    }
    if gamma.iter().all(|v| v.is_zero()) {
        // Outside the lemma's hypothesis; the zero flow settles it.
        return Ok(NonnegOutcome::Feasible(vec![Rat::zero(); g.edge_count()]));
    }
    let a = matrix::incidence_rat(g);
    let lower = vec![Rat::zero(); g.edge_count()];
    let upper = vec![None; g.edge_count()];
    match simplex::feasible_point(&a, gamma, &lower, &upper)? {
        SimplexOutcome::Feasible(w) => Ok(NonnegOutcome::Feasible(w)),
        SimplexOutcome::Infeasible { y } => {
            // y has A^T y <= 0 and gamma . y > 0; negate for the stated form.
            let z: Vec<Rat> = y.into_iter().map(|v| -v).collect();
            debug_assert!(matrix::incidence_transpose_apply(g, &z)
                .iter()
                .all(|c| !c.is_negative()));
            debug_assert!(matrix::dot(&z, gamma).is_negative());
            Ok(NonnegOutcome::Infeasible { z })
        }
    }
}

/// Checks a certificate exactly: `w >= 0`, `A^T z <= w` (in the canonical
/// coordinates of the interval shape), and strict violation of the pairing
/// bound `rhs . z <= span * sum(w)`.
pub fn verify_farkas(
    g: &Graph,
    gamma: &GammaVector,
    set: &IntervalSpec,
    cert: &FarkasCertificate,
) -> Result<bool> {
    if cert.z.len() != g.vertex_count() || cert.w.len() != g.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            got: cert.z.len(),
        });
    }
    let (rhs, span) = match canonicalize(g, gamma, set)? {
        Some(c) => (c.rhs, c.span),
        // All of R: the certificate must annihilate the column space.
        None => (gamma.clone(), Some(Rat::zero())),
    };
    if cert.w.iter().any(|w| w.is_negative()) {
        return Ok(false);
    }
    // Reflection keeps the incidence matrix itself, so the pairing
    // condition reads the same for every interval shape.
    let pair = matrix::incidence_transpose_apply(g, &cert.z);
    if !pair.iter().zip(&cert.w).all(|(c, w)| c <= w) {
        return Ok(false);
    }
    let lhs = matrix::dot(&rhs, &cert.z);
    let bound = match span {
        Some(s) => {
            let total: Rat = cert.w.iter().sum();
            s * total
        }
        // Unbounded span: only w = 0 certificates can work.
        None => {
            if cert.w.iter().any(|w| !w.is_zero()) {
                return Ok(false);
            }
            Rat::zero()
        }
    };
    Ok(lhs > bound)
}

/// Exact min and max of the value on edge `e` over all gamma-L-flows.
pub fn edge_value_range(
    g: &Graph,
    gamma: &GammaVector,
    e: usize,
    set: &IntervalSpec,
) -> Result<EdgeRange> {
    if e >= g.edge_count() {
        return Err(Error::BadParameter(format!("edge index {e} out of range")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let canon = canonicalize(g, gamma, set)?;
    let (rhs, lower, upper, dir, off) = match &canon {
        Some(c) => (
            c.rhs.clone(),
            vec![Rat::zero(); g.edge_count()],
            vec![c.span.clone(); g.edge_count()],
            c.dir,
            c.off.clone(),
        ),
        None => {
            // All of R: optimize the raw coordinate with free variables
            // split as differences of nonnegatives.
            return edge_range_free(g, gamma, e);
        }
    };
    let a = matrix::incidence_rat(g);
    let mut obj = vec![Rat::zero(); g.edge_count()];
    obj[e] = Rat::from_integer(1.into());
    let lo_prime = match simplex::minimize(&a, &rhs, &lower, &upper, &obj)? {
        MinimizeOutcome::Optimal { value, .. } => Some(value),
        MinimizeOutcome::Unbounded => None,
        MinimizeOutcome::Infeasible { .. } => return Err(Error::Infeasible),
    };
    obj[e] = Rat::from_integer((-1).into());
    let hi_prime = match simplex::minimize(&a, &rhs, &lower, &upper, &obj)? {
        MinimizeOutcome::Optimal { value, .. } => Some(-value),
        MinimizeOutcome::Unbounded => None,
        MinimizeOutcome::Infeasible { .. } => return Err(Error::Infeasible),
    };
    // Map w = dir * w' + off, which swaps the ends under reflection.
    let map = |v: Rat| if dir > 0 { v + &off } else { &off - &v };
    Ok(if dir > 0 {
        EdgeRange {
            min: lo_prime.map(map),
            max: hi_prime.map(map),
        }
    } else {
        EdgeRange {
            min: hi_prime.map(map),
            max: lo_prime.map(map),
        }
    })
}

fn edge_range_free(g: &Graph, gamma: &GammaVector, e: usize) -> Result<EdgeRange> {
    // Split each edge value as p - q with p, q >= 0.
    let m = g.edge_count();
    let inc = matrix::incidence_rat(g);
    let a: Vec<Vec<Rat>> = inc
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.extend(row.iter().map(|v| -v.clone()));
            r
        })
        .collect();
    let lower = vec![Rat::zero(); 2 * m];
    let upper = vec![None; 2 * m];
    let mut obj = vec![Rat::zero(); 2 * m];
    obj[e] = Rat::from_integer(1.into());
    obj[m + e] = Rat::from_integer((-1).into());
    let min = match simplex::minimize(&a, gamma, &lower, &upper, &obj)? {
        MinimizeOutcome::Optimal { value, .. } => Some(value),
        MinimizeOutcome::Unbounded => None,
        MinimizeOutcome::Infeasible { .. } => return Err(Error::Infeasible),
    };
    for v in obj.iter_mut() {
        *v = -v.clone();
    }
    let max = match simplex::minimize(&a, gamma, &lower, &upper, &obj)? {
        MinimizeOutcome::Optimal { value, .. } => Some(-value),
        MinimizeOutcome::Unbounded => None,
        MinimizeOutcome::Infeasible { .. } => return Err(Error::Infeasible),
    };
    Ok(EdgeRange { min, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::flow::{ones, vertex_values};
    use crate::rational::{rat, ratio};

    fn closed(a: i64, b: i64) -> IntervalSpec {
        IntervalSpec::closed(rat(a), rat(b)).unwrap()
    }

    fn assert_good_flow(g: &Graph, gamma: &GammaVector, set: &IntervalSpec, w: &FlowAssignment) {
        assert_eq!(&vertex_values(g, w).unwrap(), gamma);
        for v in w {
            if let Some(lo) = &set.lo {
                assert!(v >= lo);
            }
            if let Some(hi) = &set.hi {
                assert!(v <= hi);
            }
        }
    }

    #[test]
    fn forced_edge_out_of_interval() {
        // K2 with gamma = 1 forces the edge to 1, outside [2,3].
        let g = families::complete(2).unwrap();
        match interval_flow(&g, &ones(2), &closed(2, 3)).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(verify_farkas(&g, &ones(2), &closed(2, 3), &cert).unwrap());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn alternating_cycle_flow() {
        let g = families::cycle(4).unwrap();
        let set = closed(0, 1);
        match interval_flow(&g, &ones(4), &set).unwrap() {
            LpOutcome::Feasible(w) => assert_good_flow(&g, &ones(4), &set, &w),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn triangle_half_flow_in_unit_interval() {
        let g = families::cycle(3).unwrap();
        let set = closed(0, 1);
        match interval_flow(&g, &ones(3), &set).unwrap() {
            LpOutcome::Feasible(w) => assert_good_flow(&g, &ones(3), &set, &w),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn two_block_graph_rejects_wide_intervals() {
        // Two K_{1,3} blocks joined through a hub: no 1-sum flow with
        // values >= -1 exists no matter how large the upper bound.
        let g = families::two_block_obstruction(1, 1).unwrap();
        let gamma = ones(g.vertex_count());
        let set = closed(-1, 100);
        match interval_flow(&g, &gamma, &set).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(verify_farkas(&g, &gamma, &set, &cert).unwrap());
            }
            _ => panic!("expected infeasible"),
        }
        // Same conclusion with no upper bound at all.
        let unbounded = IntervalSpec::at_least(rat(-1));
        match interval_flow(&g, &gamma, &unbounded).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(verify_farkas(&g, &gamma, &unbounded, &cert).unwrap());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn all_reals_matches_linear_solver() {
        let star = families::star(3).unwrap();
        let set = IntervalSpec::all_reals();
        match interval_flow(&star, &ones(3), &set).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(verify_farkas(&star, &ones(3), &set, &cert).unwrap());
            }
            _ => panic!("expected infeasible"),
        }
        let c5 = families::cycle(5).unwrap();
        match interval_flow(&c5, &ones(5), &set).unwrap() {
            LpOutcome::Feasible(w) => assert_good_flow(&c5, &ones(5), &set, &w),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn upper_bounded_only() {
        // Star K_{1,3} with gamma matched to its parts: flow exists and
        // stays below 2 after reflection handling.
        let g = families::star(4).unwrap();
        let gamma = vec![rat(3), rat(1), rat(1), rat(1)];
        let set = IntervalSpec {
            lo: None,
            hi: Some(rat(2)),
            open_low: false,
            open_high: false,
        };
        match interval_flow(&g, &gamma, &set).unwrap() {
            LpOutcome::Feasible(w) => assert_good_flow(&g, &gamma, &set, &w),
            _ => panic!("expected feasible"),
        }
        // Forcing the K2 edge to 5 from above by gamma, with hi = 2, fails.
        let k2 = families::complete(2).unwrap();
        let gamma = vec![rat(5), rat(5)];
        match interval_flow(&k2, &gamma, &set).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(verify_farkas(&k2, &gamma, &set, &cert).unwrap());
            }
            _ => panic!("expected infeasible"),
        }
    }

    #[test]
    fn nonnegative_flows() {
        let k2 = families::complete(2).unwrap();
        match nonnegative_flow(&k2, &ones(2)).unwrap() {
            NonnegOutcome::Feasible(w) => assert_eq!(w, vec![rat(1)]),
            _ => panic!("expected feasible"),
        }

        // Path u-v-w with gamma (0,1,0) forces both edges to 0 and sum 1.
        let p3 = families::path(3).unwrap();
        let gamma = vec![rat(0), rat(1), rat(0)];
        match nonnegative_flow(&p3, &gamma).unwrap() {
            NonnegOutcome::Infeasible { z } => {
                let pair = matrix::incidence_transpose_apply(&p3, &z);
                assert!(pair.iter().all(|c| !c.is_negative()));
                assert!(matrix::dot(&z, &gamma).is_negative());
            }
            _ => panic!("expected infeasible"),
        }

        let c3 = families::cycle(3).unwrap();
        match nonnegative_flow(&c3, &ones(3)).unwrap() {
            NonnegOutcome::Feasible(w) => {
                assert_eq!(vertex_values(&c3, &w).unwrap(), ones(3));
                assert!(w.iter().all(|v| !v.is_negative()));
            }
            _ => panic!("expected feasible"),
        }

        // gamma = 0 is trivially feasible by the zero flow.
        match nonnegative_flow(&c3, &vec![rat(0); 3]).unwrap() {
            NonnegOutcome::Feasible(w) => assert!(w.iter().all(|v| v.is_zero())),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn reject_degenerate_certificates() {
        let g = families::complete(2).unwrap();
        let zero = FarkasCertificate {
            z: vec![rat(0); 2],
            w: vec![rat(0)],
        };
        assert!(!verify_farkas(&g, &ones(2), &closed(2, 3), &zero).unwrap());
        if let LpOutcome::Infeasible(mut cert) =
            interval_flow(&g, &ones(2), &closed(2, 3)).unwrap()
        {
            cert.w[0] = -cert.w[0].clone() - rat(1);
            assert!(!verify_farkas(&g, &ones(2), &closed(2, 3), &cert).unwrap());
        } else {
            panic!("expected infeasible");
        }
    }

    #[test]
    fn edge_ranges() {
        let k2 = families::complete(2).unwrap();
        let r = edge_value_range(&k2, &ones(2), 0, &IntervalSpec::all_reals()).unwrap();
        assert_eq!(r.min, Some(rat(1)));
        assert_eq!(r.max, Some(rat(1)));

        let c4 = families::cycle(4).unwrap();
        let r = edge_value_range(&c4, &ones(4), 0, &closed(0, 1)).unwrap();
        assert_eq!(r.min, Some(rat(0)));
        assert_eq!(r.max, Some(rat(1)));

        // Unbounded direction along the alternating cycle kernel.
        let r = edge_value_range(&c4, &ones(4), 0, &IntervalSpec::all_reals()).unwrap();
        assert_eq!(r, EdgeRange { min: None, max: None });

        // Infeasible instances refuse.
        assert_eq!(
            edge_value_range(&k2, &ones(2), 0, &closed(2, 3)),
            Err(Error::Infeasible)
        );
    }

    #[test]
    fn shift_equivalence_random() {
        let mut rng = crate::catalog::seeded_rng(23);
        for trial in 0..100 {
            let n = 2 + (trial % 6);
            let g = crate::catalog::random_connected_graph(n, trial % 3, &mut rng);
            let gamma = crate::catalog::random_integer_gamma(n, -3, 3, &mut rng);
            let a = rat((trial % 5) as i64 - 2);
            let b = &a + rat((trial % 4) as i64);
            let set = IntervalSpec::closed(a.clone(), b.clone()).unwrap();
            let shifted: GammaVector = (0..n)
                .map(|v| &gamma[v] - &(&a * rat(g.degree(v) as i64)))
                .collect();
            let set0 = IntervalSpec::closed(rat(0), &b - &a).unwrap();
            let lhs = interval_flow(&g, &gamma, &set).unwrap().is_feasible();
            let rhs = interval_flow(&g, &shifted, &set0).unwrap().is_feasible();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn interval_monotonicity_random() {
        let mut rng = crate::catalog::seeded_rng(29);
        for trial in 0..60 {
            let n = 2 + (trial % 6);
            let g = crate::catalog::random_connected_graph(n, trial % 3, &mut rng);
            let gamma = crate::catalog::random_integer_gamma(n, -2, 2, &mut rng);
            let mut last = false;
            for width in 0..4i64 {
                let set = IntervalSpec::closed(rat(-width), rat(width)).unwrap();
                let now = interval_flow(&g, &gamma, &set).unwrap().is_feasible();
                assert!(!last || now, "feasibility lost when the interval grew");
                last = now;
            }
        }
    }

    #[test]
    fn feasible_results_self_verify() {
        let mut rng = crate::catalog::seeded_rng(31);
        for trial in 0..80 {
            let n = 2 + (trial % 6);
            let g = crate::catalog::random_connected_graph(n, trial % 3, &mut rng);
            let gamma = crate::catalog::random_integer_gamma(n, -3, 3, &mut rng);
            let set = IntervalSpec::closed(rat(-1), ratio(3, 2)).unwrap();
            match interval_flow(&g, &gamma, &set).unwrap() {
                LpOutcome::Feasible(w) => assert_good_flow(&g, &gamma, &set, &w),
                LpOutcome::Infeasible(cert) => {
                    assert!(verify_farkas(&g, &gamma, &set, &cert).unwrap());
                }
            }
        }
    }

    #[test]
    fn open_intervals_rejected() {
        let g = families::cycle(3).unwrap();
        let mut set = closed(0, 1);
        set.open_low = true;
        assert!(interval_flow(&g, &ones(3), &set).is_err());
    }
}
