//! Combinatorial conditions under which a conforming alpha-tree already
//! certifies extremality.

use crate::alpha::{conforms, is_alpha_tree, AlphaForest};
use crate::graph::UnionFind;
use crate::model::{Flow, Network};
use crate::polytope;

use super::DegeneracyError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuffVerdict {
    Certified,
    NotApplicable,
}

fn preconditions(net: &Network, f: &Flow, forest: &AlphaForest) -> Result<(), DegeneracyError> {
    if !is_alpha_tree(net, forest)? {
        return Err(DegeneracyError::Precondition("forest is not an alpha-tree".into()));
    }
    if !conforms(net, f, forest)? {
        return Err(DegeneracyError::Precondition("flow does not conform to the alpha-tree".into()));
    }
    Ok(())
}

/// Certified verdicts are checked against the rank of the active rows.
fn settle(net: &Network, f: &Flow, certified: bool) -> Result<SuffVerdict, DegeneracyError> {
    if !certified {
        return Ok(SuffVerdict::NotApplicable);
    }
    let cert = polytope::is_extremal(net, f)?;
    if !cert.is_extremal() {
        return Err(DegeneracyError::FalseCertification {
            rank: cert.rank_active,
            expected: net.vertex_count() - 1,
        });
    }
    Ok(SuffVerdict::Certified)
}

/// Every component of `(V, E_F)` holds at most one active vertex.
pub fn check_suff_one_active_per_component(
    net: &Network,
    f: &Flow,
    forest: &AlphaForest,
) -> Result<SuffVerdict, DegeneracyError> {
    preconditions(net, f, forest)?;
    let mut uf = UnionFind::new(net.vertex_count());
    for &e in &forest.edges {
        uf.union(net.edge(e).tail, net.edge(e).head);
    }
    let mut seen = std::collections::BTreeSet::new();
    let certified = forest.vertices.iter().all(|&v| seen.insert(uf.find(v)));
    settle(net, f, certified)
}

/// At most one active vertex has degree three or more.
pub fn check_suff_small_degree(
    net: &Network,
    f: &Flow,
    forest: &AlphaForest,
) -> Result<SuffVerdict, DegeneracyError> {
    preconditions(net, f, forest)?;
    let high = forest.vertices.iter().filter(|&&v| net.degree(v) >= 3).count();
    settle(net, f, high <= 1)
}
