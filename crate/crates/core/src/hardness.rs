//! The SubsetSum gadget: a network that is degenerate exactly when a
//! subset of the item sizes hits the target.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::alpha::{conforms, is_alpha_tree, AlphaError, AlphaForest};
use crate::model::{Flow, ModelError, Network, NetworkBuilder, Potential};
use crate::polytope::{self, normalize_direction, ExtremalityCertificate, PolytopeError};
use crate::rational::{int, Interval, Rational};

pub const DEFAULT_ITEM_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("{items} items exceeds the cap of {cap}")]
    CapExceeded { items: usize, cap: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error("{0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    sizes: Vec<u64>,
    target: u64,
}

impl SubsetSumInstance {
    pub fn new(sizes: Vec<u64>, target: u64) -> Result<Self, HardnessError> {
        if sizes.is_empty() {
            return Err(HardnessError::InvalidInstance("no item sizes".into()));
        }
        if sizes.contains(&0) {
            return Err(HardnessError::InvalidInstance("item sizes must be positive".into()));
        }
        if target == 0 {
            return Err(HardnessError::InvalidInstance("target must be positive".into()));
        }
        Ok(SubsetSumInstance { sizes, target })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    fn check_cap(&self, cap: usize) -> Result<(), HardnessError> {
        if self.len() > cap {
            return Err(HardnessError::CapExceeded { items: self.len(), cap });
        }
        Ok(())
    }
}

/// Vertex and edge indices of the named parts of the gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLabels {
    pub v: usize,
    pub w: usize,
    pub s: usize,
    pub t: usize,
    pub items: Vec<usize>,
    pub sv: usize,
    pub sw: usize,
    pub vw: usize,
    pub wt: usize,
    /// Edges `(v, v_i)`.
    pub item_in: Vec<usize>,
    /// Edges `(v_i, t)`.
    pub item_out: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gadget {
    pub network: Network,
    pub labels: GadgetLabels,
}

/// Vertices in the order `v, w, s, t, v1..vn`; edges `sv, sw, vw, wt`
/// followed by `(v, v_i), (v_i, t)` per item.
pub fn build_gadget(inst: &SubsetSumInstance) -> Gadget {
    let n = inst.len();
    let beta = int(inst.target as i64);
    let mut nb = NetworkBuilder::new();
    nb.add_vertex("v", Interval::symmetric(beta.clone()))
        .add_vertex("w", Interval::at_least(int(0)))
        .add_vertex("s", Interval::free())
        .add_vertex("t", Interval::free());
    for i in 1..=n {
        nb.add_vertex(format!("v{i}"), Interval::at_least(int(0)));
    }
    let cap = || Interval::at_most(int(1));
    nb.add_edge("sv", "s", "v", beta, Interval::free())
        .add_edge("sw", "s", "w", int(1), Interval::free())
        .add_edge("vw", "v", "w", int(1), cap())
        .add_edge("wt", "w", "t", int(1), Interval::free());
    for (i, &a) in inst.sizes.iter().enumerate() {
        let b = int(2 * a as i64);
        nb.add_edge(format!("v_v{}", i + 1), "v", format!("v{}", i + 1), b.clone(), cap())
            .add_edge(format!("v{}_t", i + 1), format!("v{}", i + 1), "t", b, Interval::free());
    }
    let network = nb.build().expect("gadget satisfies the network invariants");
    let labels = GadgetLabels {
        v: 0,
        w: 1,
        s: 2,
        t: 3,
        items: (4..4 + n).collect(),
        sv: 0,
        sw: 1,
        vw: 2,
        wt: 3,
        item_in: (0..n).map(|i| 4 + 2 * i).collect(),
        item_out: (0..n).map(|i| 5 + 2 * i).collect(),
    };
    Gadget { network, labels }
}

/// The first subset (by bitmask over item indices) hitting the target.
pub fn subset_sum_search(inst: &SubsetSumInstance) -> Option<Vec<usize>> {
    let n = inst.len();
    (0u64..1 << n)
        .find(|mask| {
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| inst.sizes[i]).sum::<u64>() == inst.target
        })
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// A non-extremal conforming point for the subset `subset`.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetWitness {
    pub subset: Vec<usize>,
    /// The gadget graph and elasticities with the alpha-tree's elements
    /// fixed at zero and everything else free.
    pub network: Network,
    pub alpha_tree: AlphaForest,
    pub flow: Flow,
    pub potential: Potential,
    pub certificate: ExtremalityCertificate,
}

/// Active elements: `(v, w)`, the vertices `v` and `w`, and for each item
/// either the vertex `v_i` (in the subset) or the edge `(v, v_i)`.
pub fn subset_alpha_tree(labels: &GadgetLabels, subset: &[usize]) -> AlphaForest {
    let n = labels.items.len();
    let in_subset = |i: usize| subset.contains(&i);
    let edges = std::iter::once(labels.vw).chain((0..n).filter(|&i| !in_subset(i)).map(|i| labels.item_in[i]));
    let vertices = [labels.v, labels.w]
        .into_iter()
        .chain((0..n).filter(|&i| in_subset(i)).map(|i| labels.items[i]));
    let mut orientation = BTreeMap::from([(labels.v, labels.sv), (labels.w, labels.wt)]);
    for &i in subset {
        orientation.insert(labels.items[i], labels.item_out[i]);
    }
    AlphaForest::new(edges, vertices).with_orientation(orientation)
}

/// `v, w` at 0, `s` at -2, `t` at 2 and `v_i` at 1 exactly for the subset.
pub fn subset_potential(labels: &GadgetLabels, subset: &[usize], vertex_count: usize) -> Potential {
    let mut phi = vec![Rational::zero(); vertex_count];
    phi[labels.s] = int(-2);
    phi[labels.t] = int(2);
    for &i in subset {
        phi[labels.items[i]] = int(1);
    }
    Potential(phi)
}

/// Tests one subset: the zero flow on the pinned network conforms to the
/// subset's alpha-tree and is returned when it is not extremal.
pub fn check_subset(gadget: &Gadget, subset: &[usize]) -> Result<Option<GadgetWitness>, HardnessError> {
    let labels = &gadget.labels;
    let forest = subset_alpha_tree(labels, subset);
    let zero = || Interval::point(Rational::zero());
    let network = gadget
        .network
        .with_edge_bounds(|e, _| if forest.edges.contains(&e) { zero() } else { Interval::free() })?
        .with_vertex_bounds(|v, _| if forest.vertices.contains(&v) { zero() } else { Interval::free() })?;
    let flow = Flow::zero(&network);
    let certificate = polytope::is_extremal(&network, &flow)?;
    if certificate.is_extremal() {
        return Ok(None);
    }
    if !is_alpha_tree(&network, &forest)? || !conforms(&network, &flow, &forest)? {
        return Err(HardnessError::Internal("subset forest is not a conforming alpha-tree".into()));
    }
    let potential = subset_potential(labels, subset, network.vertex_count());
    let direction = certificate.direction.as_ref().expect("non-extremal certificates carry a direction");
    if normalize_direction(&potential.0) != direction.0 {
        return Err(HardnessError::Internal("direction is not parallel to the subset potential".into()));
    }
    Ok(Some(GadgetWitness {
        subset: subset.to_vec(),
        network,
        alpha_tree: forest,
        flow,
        potential,
        certificate,
    }))
}

/// Searches all subsets through [`check_subset`], in bitmask order.
pub fn gadget_polytope_search(inst: &SubsetSumInstance, cap: usize) -> Result<Option<GadgetWitness>, HardnessError> {
    inst.check_cap(cap)?;
    let gadget = build_gadget(inst);
    let n = inst.len();
    for mask in 0u64..1 << n {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if let Some(w) = check_subset(&gadget, &subset)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetDecision {
    pub combinatorial: Option<Vec<usize>>,
    pub polytope: Option<GadgetWitness>,
}

impl GadgetDecision {
    pub fn agree(&self) -> bool {
        self.combinatorial.is_some() == self.polytope.is_some()
    }

    pub fn is_degenerate(&self) -> bool {
        self.polytope.is_some()
    }
}

/// Runs both the subset search and the polytope search.
pub fn gadget_degenerate(inst: &SubsetSumInstance, cap: usize) -> Result<GadgetDecision, HardnessError> {
    inst.check_cap(cap)?;
    Ok(GadgetDecision {
        combinatorial: subset_sum_search(inst),
        polytope: gadget_polytope_search(inst, cap)?,
    })
}
