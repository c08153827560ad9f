//! Flow domain types: edge assignments, vertex targets, admissible-value
//! sets, feasibility certificates, and self-verifying construction results.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix;
use crate::rational::{rat, Rat};
use num_traits::Zero;

/// Per-edge rational values, indexed like the host graph's edges.
pub type FlowAssignment = Vec<Rat>;

/// Per-vertex rational targets.
pub type GammaVector = Vec<Rat>;

pub fn constant_gamma(n: usize, c: &Rat) -> GammaVector {
    vec![c.clone(); n]
}

/// Exact per-vertex sums of incident edge values.
pub fn vertex_values(g: &Graph, w: &FlowAssignment) -> Result<GammaVector> {
    if w.len() != g.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: g.edge_count(),
            got: w.len(),
        });
    }
    Ok(matrix::incidence_apply(g, w))
}

/// An interval of admissible edge values; either bound may be absent
/// (unbounded side), and either side may be open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpec {
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
    pub open_low: bool,
    pub open_high: bool,
}

impl IntervalSpec {
    pub fn closed(lo: Rat, hi: Rat) -> Result<IntervalSpec> {
        if lo > hi {
            return Err(Error::BadParameter("interval with lo > hi".into()));
        }
        Ok(IntervalSpec {
            lo: Some(lo),
            hi: Some(hi),
            open_low: false,
            open_high: false,
        })
    }

    pub fn all_reals() -> IntervalSpec {
        IntervalSpec {
            lo: None,
            hi: None,
            open_low: false,
            open_high: false,
        }
    }

    /// `[lo, +infinity)`.
    pub fn at_least(lo: Rat) -> IntervalSpec {
        IntervalSpec {
            lo: Some(lo),
            hi: None,
            open_low: false,
            open_high: false,
        }
    }

    pub fn is_closed(&self) -> bool {
        !self.open_low && !self.open_high
    }

    /// Empty only in the degenerate open `a = b` cases.
    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => a > b || (a == b && (self.open_low || self.open_high)),
            _ => false,
        }
    }

    pub fn contains(&self, v: &Rat) -> bool {
        if let Some(a) = &self.lo {
            if v < a || (self.open_low && v == a) {
                return false;
            }
        }
        if let Some(b) = &self.hi {
            if v > b || (self.open_high && v == b) {
                return false;
            }
        }
        true
    }
}

/// Admissible edge-value sets beyond plain intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSet {
    /// Sorted, duplicate-free finite list.
    Finite(Vec<Rat>),
    Interval(IntervalSpec),
    /// An interval with 0 removed.
    PuncturedInterval(IntervalSpec),
    /// All nonzero reals.
    NonzeroReals,
    /// All nonzero integers.
    NonzeroIntegers,
}

impl LabelSet {
    pub fn finite(values: Vec<Rat>) -> LabelSet {
        let mut v = values;
        v.sort();
        v.dedup();
        LabelSet::Finite(v)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            LabelSet::Finite(v) => v.binary_search(x).is_ok(),
            LabelSet::Interval(i) => i.contains(x),
            LabelSet::PuncturedInterval(i) => !x.is_zero() && i.contains(x),
            LabelSet::NonzeroReals => !x.is_zero(),
            LabelSet::NonzeroIntegers => !x.is_zero() && crate::rational::is_integer(x),
        }
    }
}

/// Infeasibility witness for an interval-flow system: vertex vector `z`
/// and nonnegative edge vector `w` that together violate the feasibility
/// inequality strictly.  The vectors live against the standard-form system
/// derived from `(gamma, L)` (see [`crate::lp`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub z: Vec<Rat>,
    pub w: Vec<Rat>,
}

/// A constructed flow together with the value set the producing theorem
/// claims and an exactness self-check performed at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub flow: FlowAssignment,
    pub claimed_label_set: LabelSet,
    /// Name of the construction that produced the flow.
    pub provenance: String,
}

impl FlowResult {
    /// Builds and verifies: every value in the claimed set, every vertex
    /// sum equal to the target.  A failure here is a defect in the
    /// construction, reported as an internal error.
    pub fn checked(
        g: &Graph,
        flow: FlowAssignment,
        claimed: LabelSet,
        gamma: &GammaVector,
        provenance: &str,
    ) -> Result<FlowResult> {
        let sums = vertex_values(g, &flow)?;
        if &sums != gamma {
            return Err(Error::Internal(format!(
                "{provenance}: vertex sums do not match the target"
            )));
        }
        if let Some(bad) = flow.iter().position(|v| !claimed.contains(v)) {
            return Err(Error::Internal(format!(
                "{provenance}: edge {bad} value outside the claimed label set"
            )));
        }
        Ok(FlowResult {
            flow,
            claimed_label_set: claimed,
            provenance: provenance.to_string(),
        })
    }
}

/// Convenience: the all-ones target.
pub fn ones(n: usize) -> GammaVector {
    constant_gamma(n, &rat(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::rational::ratio;

    #[test]
    fn vertex_value_examples() {
        let k2 = families::complete(2).unwrap();
        assert_eq!(vertex_values(&k2, &vec![rat(1)]).unwrap(), vec![rat(1), rat(1)]);
        let c4 = families::cycle(4).unwrap();
        let w = vec![rat(1), rat(0), rat(1), rat(0)];
        assert_eq!(vertex_values(&c4, &w).unwrap(), ones(4));
        let c3 = families::cycle(3).unwrap();
        let w = vec![ratio(1, 2), ratio(1, 2), ratio(1, 2)];
        assert_eq!(vertex_values(&c3, &w).unwrap(), ones(3));
        assert!(vertex_values(&c3, &vec![rat(1)]).is_err());
    }

    #[test]
    fn interval_membership() {
        let i = IntervalSpec::closed(rat(0), rat(1)).unwrap();
        assert!(i.contains(&ratio(1, 2)) && i.contains(&rat(0)) && i.contains(&rat(1)));
        let half_open = IntervalSpec {
            lo: Some(rat(0)),
            hi: Some(rat(1)),
            open_low: true,
            open_high: false,
        };
        assert!(!half_open.contains(&rat(0)) && half_open.contains(&rat(1)));
        let empty = IntervalSpec {
            lo: Some(rat(1)),
            hi: Some(rat(1)),
            open_low: true,
            open_high: false,
        };
        assert!(empty.is_empty());
        assert!(IntervalSpec::closed(rat(1), rat(0)).is_err());
    }

    #[test]
    fn label_sets() {
        let l = LabelSet::finite(vec![rat(1), rat(-1), rat(1)]);
        assert_eq!(l, LabelSet::Finite(vec![rat(-1), rat(1)]));
        assert!(l.contains(&rat(-1)) && !l.contains(&rat(0)));
        assert!(LabelSet::NonzeroIntegers.contains(&rat(-3)));
        assert!(!LabelSet::NonzeroIntegers.contains(&ratio(1, 2)));
        assert!(!LabelSet::NonzeroReals.contains(&rat(0)));
    }

    #[test]
    fn checked_flow_rejects_bad_constructions() {
        let c4 = families::cycle(4).unwrap();
        let good = FlowResult::checked(
            &c4,
            vec![rat(1), rat(0), rat(1), rat(0)],
            LabelSet::Interval(IntervalSpec::closed(rat(0), rat(1)).unwrap()),
            &ones(4),
            "test",
        );
        assert!(good.is_ok());
        let bad_sum = FlowResult::checked(
            &c4,
            vec![rat(1), rat(1), rat(0), rat(0)],
            LabelSet::Interval(IntervalSpec::closed(rat(0), rat(1)).unwrap()),
            &ones(4),
            "test",
        );
        assert!(bad_sum.is_err());
    }
}
