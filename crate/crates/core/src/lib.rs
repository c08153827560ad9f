//! Exact-arithmetic construction and certification of `c`-sum and
//! gamma-valued `L`-flows on simple undirected graphs.
//!
//! An `L`-flow is an edge weighting `w: E -> L`; it is a gamma-`L`-flow when
//! the sum of the weights on the edges incident to each vertex `v` equals
//! `gamma(v)`.  Everything here works over arbitrary-precision rationals:
//! decisions come with exact witnesses (a flow) or exact obstructions
//! (a Farkas certificate or a parity imbalance), and every construction is
//! re-verified before it is returned.

pub mod catalog;
pub mod error;
pub mod factor;
pub mod families;
pub mod flow;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod matrix;
pub mod oracle;
pub mod rational;
pub mod simplex;
pub mod solver;
pub mod special;
pub mod tree;

pub use error::{Error, Result};
pub use flow::{FarkasCertificate, FlowAssignment, FlowResult, GammaVector, IntervalSpec, LabelSet};
pub use graph::{Bipartition, Graph};
pub use rational::Rat;
