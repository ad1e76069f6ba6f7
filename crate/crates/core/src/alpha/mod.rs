//! Alpha-forests: sets of active edges and vertices that can be oriented
//! into a forest, and their relation to extreme points.
//!
//! Extraction of a conforming alpha-tree from an extreme point runs in three
//! steps: contract the active edges and reduce the active vertex rows to a
//! small matrix over the components ([`contract_active`]), read off a
//! bipartite link graph from its sign pattern ([`build_link_graph`]), and
//! thin that graph to a tree ([`select_connecting_edges`]).

mod contract;
mod link;
mod orientation;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::UnionFind;
use crate::matrix::RowSpace;
use crate::model::{Flow, ModelError, Network};
use crate::polytope::{self, Element, PolytopeError};

pub use contract::{contract_active, ContractionResult};
pub use link::{build_link_graph, hall_violation, select_connecting_edges, BipartiteLinkGraph};
pub use orientation::find_orientation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("{kind} index {index} out of range")]
    OutOfRange { kind: &'static str, index: usize },
    #[error("not an alpha-forest: {0}")]
    InvalidForest(String),
    #[error("flow is not extremal")]
    NotExtremal,
    #[error("active rows have rank {rank} with {count} rows; need {expected} of each")]
    RankPrecondition { rank: usize, count: usize, expected: usize },
    #[error("link graph violates the surplus condition on active vertices {0:?}")]
    HallViolated(Vec<usize>),
    #[error("{0}")]
    Internal(String),
}

impl From<ModelError> for AlphaError {
    fn from(e: ModelError) -> Self {
        AlphaError::Polytope(PolytopeError::Model(e))
    }
}

/// Active edges `E_F`, active vertices `V_F` and optionally a
/// vertex-orientation map `V_F -> E \ E_F`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AlphaForest {
    pub edges: BTreeSet<usize>,
    pub vertices: BTreeSet<usize>,
    pub orientation: Option<BTreeMap<usize, usize>>,
}

impl AlphaForest {
    pub fn new(edges: impl IntoIterator<Item = usize>, vertices: impl IntoIterator<Item = usize>) -> Self {
        AlphaForest {
            edges: edges.into_iter().collect(),
            vertices: vertices.into_iter().collect(),
            orientation: None,
        }
    }

    pub fn with_orientation(mut self, orientation: BTreeMap<usize, usize>) -> Self {
        self.orientation = Some(orientation);
        self
    }

    pub fn size(&self) -> usize {
        self.edges.len() + self.vertices.len()
    }

    /// Edges first, both in index order.
    pub fn elements(&self) -> Vec<Element> {
        self.edges
            .iter()
            .map(|&e| Element::Edge(e))
            .chain(self.vertices.iter().map(|&v| Element::Vertex(v)))
            .collect()
    }

    fn check_indices(&self, net: &Network) -> Result<(), AlphaError> {
        if let Some(&e) = self.edges.iter().find(|&&e| e >= net.edge_count()) {
            return Err(AlphaError::OutOfRange { kind: "edge", index: e });
        }
        if let Some(&v) = self.vertices.iter().find(|&&v| v >= net.vertex_count()) {
            return Err(AlphaError::OutOfRange { kind: "vertex", index: v });
        }
        if let Some(map) = &self.orientation {
            for (&v, &e) in map {
                if v >= net.vertex_count() {
                    return Err(AlphaError::OutOfRange { kind: "vertex", index: v });
                }
                if e >= net.edge_count() {
                    return Err(AlphaError::OutOfRange { kind: "edge", index: e });
                }
            }
        }
        Ok(())
    }
}

/// Outcome of [`validate_alpha_forest`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestCheck {
    /// The given or discovered orientation when valid.
    pub orientation: Option<BTreeMap<usize, usize>>,
    pub reason: Option<String>,
}

impl ForestCheck {
    pub fn is_valid(&self) -> bool {
        self.reason.is_none()
    }

    fn fail(reason: impl Into<String>) -> Self {
        ForestCheck {
            orientation: None,
            reason: Some(reason.into()),
        }
    }
}

/// Checks a given orientation directly, or searches for one.
pub fn validate_alpha_forest(net: &Network, forest: &AlphaForest) -> Result<ForestCheck, AlphaError> {
    forest.check_indices(net)?;
    let Some(map) = &forest.orientation else {
        return Ok(match find_orientation(net, &forest.edges, &forest.vertices) {
            Some(found) => ForestCheck {
                orientation: Some(found),
                reason: None,
            },
            None => ForestCheck::fail("no valid vertex-orientation map exists"),
        });
    };
    let domain: BTreeSet<usize> = map.keys().copied().collect();
    if domain != forest.vertices {
        return Ok(ForestCheck::fail("orientation domain differs from the active vertices"));
    }
    let mut used = BTreeSet::new();
    for (&v, &e) in map {
        let edge = net.edge(e);
        if edge.tail != v && edge.head != v {
            return Ok(ForestCheck::fail(format!(
                "edge {:?} is not incident to vertex {:?}",
                edge.id,
                net.vertex(v).id
            )));
        }
        if forest.edges.contains(&e) {
            return Ok(ForestCheck::fail(format!("edge {:?} is already active", edge.id)));
        }
        if !used.insert(e) {
            return Ok(ForestCheck::fail(format!("edge {:?} is used twice", edge.id)));
        }
    }
    let mut uf = UnionFind::new(net.vertex_count());
    for &e in forest.edges.iter().chain(map.values()) {
        let edge = net.edge(e);
        if !uf.union(edge.tail, edge.head) {
            return Ok(ForestCheck::fail(format!("edge {:?} closes a cycle", edge.id)));
        }
    }
    Ok(ForestCheck {
        orientation: Some(map.clone()),
        reason: None,
    })
}

/// A valid alpha-forest of size `|V| - 1`.
pub fn is_alpha_tree(net: &Network, forest: &AlphaForest) -> Result<bool, AlphaError> {
    let check = validate_alpha_forest(net, forest)?;
    if let Some(reason) = check.reason {
        return Err(AlphaError::InvalidForest(reason));
    }
    Ok(forest.size() == net.vertex_count() - 1)
}

/// Active edges sit at a finite flow bound and active vertices at a finite
/// injection bound.
pub fn conforms(net: &Network, f: &Flow, forest: &AlphaForest) -> Result<bool, AlphaError> {
    let active = polytope::active_set(net, f)?;
    let check = validate_alpha_forest(net, forest)?;
    if let Some(reason) = check.reason {
        return Err(AlphaError::InvalidForest(reason));
    }
    Ok(forest.elements().into_iter().all(|el| active.contains(el)))
}

/// A conforming alpha-tree for an extreme point.
pub fn extract_alpha_tree(net: &Network, f: &Flow) -> Result<AlphaForest, AlphaError> {
    let cert = polytope::is_extremal(net, f)?;
    if !cert.is_extremal() {
        return Err(AlphaError::NotExtremal);
    }
    let n = net.vertex_count();
    let mut space = RowSpace::new(n);
    let mut edges = BTreeSet::new();
    let mut vertices = BTreeSet::new();
    for el in cert.active.elements() {
        if space.rank() == n - 1 {
            break;
        }
        if space.try_insert(&el.row(net)) {
            match el {
                Element::Edge(e) => edges.insert(e),
                Element::Vertex(v) => vertices.insert(v),
            };
        }
    }
    let cr = contract_active(net, &edges, &vertices)?;
    let h = build_link_graph(&cr)?;
    let chosen = select_connecting_edges(&h)?;
    let mut orientation = BTreeMap::new();
    for &(i, j) in &chosen {
        let v = h.w[i];
        let e = net
            .incident(v)
            .iter()
            .filter(|&&(u, _)| cr.component_of[u] == j)
            .map(|&(_, e)| e)
            .min()
            .ok_or_else(|| AlphaError::Internal("link edge without a network edge".into()))?;
        orientation.insert(v, e);
    }
    let forest = AlphaForest {
        edges,
        vertices,
        orientation: Some(orientation),
    };
    if !is_alpha_tree(net, &forest)? || !conforms(net, f, &forest)? {
        return Err(AlphaError::Internal("extracted forest fails its contract".into()));
    }
    Ok(forest)
}
