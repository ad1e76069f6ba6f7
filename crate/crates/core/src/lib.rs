//! Differential-flow polytopes over exact rationals.
//!
//! A [`Network`] carries a weakly connected anti-symmetric digraph, positive
//! elasticities `b` and interval bounds on edge flows and vertex injections.
//! A flow is *differential* when `f = B^T phi` for some potential `phi`. The
//! crate tests membership and extremality in the resulting polytope, extracts
//! conforming alpha-trees from extreme points, recognises cacti (the graphs on
//! which conformance and extremality coincide for every choice of weights and
//! bounds), builds explicit degeneracy witnesses otherwise, and constructs the
//! SubsetSum gadget showing the general question is hard.

pub mod alpha;
pub mod degeneracy;
pub mod generate;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod matrix;
pub mod model;
pub mod polytope;
pub mod rational;

pub use alpha::AlphaForest;
pub use matrix::RationalMatrix;
pub use model::{Edge, Flow, ModelError, Network, NetworkBuilder, Potential, Vertex};
pub use rational::{int, ratio, Bound, Interval, Rational, Side};
