//! Exhaustive search for conforming points that are not extremal.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_traits::Zero;

use crate::alpha::{conforms, find_orientation, AlphaForest};
use crate::graph::UnionFind;
use crate::model::{Flow, Network, Potential};
use crate::polytope::{self, element_matrix, Element, ExtremalityCertificate, Face, FaceShape};
use crate::rational::{Interval, Rational};

use super::DegeneracyError;

pub const DEFAULT_MAX_VERTICES: usize = 8;

/// `Free` asks whether some choice of bounds makes a conforming point
/// non-extremal; `Fixed` searches within the bounds of the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundMode {
    #[default]
    Free,
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub mode: BoundMode,
    pub max_vertices: usize,
    /// Maximum number of candidate pairs `(E_F, V_F)` examined.
    pub budget: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: BoundMode::Free,
            max_vertices: DEFAULT_MAX_VERTICES,
            budget: None,
        }
    }
}

/// A network, a conforming alpha-tree and a flow that is not extremal.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateCertificate {
    pub network: Network,
    pub alpha_tree: AlphaForest,
    pub flow: Flow,
    pub extremality: ExtremalityCertificate,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NondegeneracyVerdict {
    Degenerate(Box<DegenerateCertificate>),
    NoCounterexample { examined: u64 },
}

impl NondegeneracyVerdict {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, NondegeneracyVerdict::Degenerate(_))
    }
}

type Visit<'a> = dyn FnMut(&BTreeSet<usize>, &BTreeSet<usize>) -> Result<ControlFlow<()>, DegeneracyError> + 'a;

/// Pairs of an acyclic edge set and a vertex set of combined size `size`.
struct Candidates<'a> {
    net: &'a Network,
    size: usize,
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

impl Candidates<'_> {
    fn run(&self, visit: &mut Visit<'_>) -> Result<ControlFlow<()>, DegeneracyError> {
        let mut chosen = Vec::new();
        self.edge_step(0, &UnionFind::new(self.net.vertex_count()), &mut chosen, visit)
    }

    fn edge_step(
        &self,
        start: usize,
        uf: &UnionFind,
        chosen: &mut Vec<usize>,
        visit: &mut Visit<'_>,
    ) -> Result<ControlFlow<()>, DegeneracyError> {
        let need = self.size - chosen.len();
        if need <= self.vertices.len() {
            let edges: BTreeSet<usize> = chosen.iter().copied().collect();
            let mut picked = Vec::with_capacity(need);
            if self.vertex_step(0, need, &edges, &mut picked, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if need == 0 {
            return Ok(ControlFlow::Continue(()));
        }
        for i in start..self.edges.len() {
            let e = self.edges[i];
            let mut next = uf.clone();
            if !next.union(self.net.edge(e).tail, self.net.edge(e).head) {
                continue;
            }
            chosen.push(e);
            let flow = self.edge_step(i + 1, &next, chosen, visit)?;
            chosen.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn vertex_step(
        &self,
        start: usize,
        need: usize,
        edges: &BTreeSet<usize>,
        picked: &mut Vec<usize>,
        visit: &mut Visit<'_>,
    ) -> Result<ControlFlow<()>, DegeneracyError> {
        if picked.len() == need {
            let vertices = picked.iter().copied().collect();
            return visit(edges, &vertices);
        }
        for i in start..self.vertices.len() {
            if self.vertices.len() - i < need - picked.len() {
                break;
            }
            picked.push(self.vertices[i]);
            let flow = self.vertex_step(i + 1, need, edges, picked, visit)?;
            picked.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn candidates<'a>(net: &'a Network, size: usize, allowed: &dyn Fn(Element) -> bool) -> Candidates<'a> {
    Candidates {
        net,
        size,
        edges: (0..net.edge_count()).filter(|&e| allowed(Element::Edge(e))).collect(),
        vertices: (0..net.vertex_count()).filter(|&v| allowed(Element::Vertex(v))).collect(),
    }
}

/// All alpha-forests of the given size over allowed elements, each with an
/// orientation, in search order.
pub fn enumerate_alpha_forests(
    net: &Network,
    size: usize,
    allowed: &dyn Fn(Element) -> bool,
) -> Vec<AlphaForest> {
    let mut out = Vec::new();
    let _ = candidates(net, size, allowed).run(&mut |edges, vertices| {
        if let Some(map) = find_orientation(net, edges, vertices) {
            out.push(AlphaForest {
                edges: edges.clone(),
                vertices: vertices.clone(),
                orientation: Some(map),
            });
        }
        Ok(ControlFlow::Continue(()))
    });
    out
}

pub fn enumerate_alpha_trees(net: &Network, cap: usize) -> Result<Vec<AlphaForest>, DegeneracyError> {
    let n = net.vertex_count();
    if n > cap {
        return Err(DegeneracyError::TooLarge { vertices: n, cap });
    }
    Ok(enumerate_alpha_forests(net, n - 1, &|_| true))
}

/// Searches the alpha-trees of `net` for one whose rows are dependent and
/// which some feasible point conforms to without being extremal.
///
/// A spanning tree of active edges always has independent rows, and a
/// full-rank alpha-tree pins a single point, so only dependent ones are
/// examined further.
pub fn test_nondegeneracy(net: &Network, options: &SearchOptions) -> Result<NondegeneracyVerdict, DegeneracyError> {
    let n = net.vertex_count();
    if n > options.max_vertices {
        return Err(DegeneracyError::TooLarge {
            vertices: n,
            cap: options.max_vertices,
        });
    }
    let allowed = |el: Element| match options.mode {
        BoundMode::Free => true,
        BoundMode::Fixed => el.interval(net).has_finite_side(),
    };
    let mut examined = 0u64;
    let mut found: Option<DegenerateCertificate> = None;
    let _ = candidates(net, n - 1, &allowed).run(&mut |edges, vertices| {
        examined += 1;
        if let Some(budget) = options.budget {
            if examined > budget {
                return Err(DegeneracyError::BudgetExceeded { budget });
            }
        }
        let forest = AlphaForest {
            edges: edges.clone(),
            vertices: vertices.clone(),
            orientation: None,
        };
        let elements = forest.elements();
        if element_matrix(net, &elements).rank() == n - 1 {
            return Ok(ControlFlow::Continue(()));
        }
        let Some(map) = find_orientation(net, edges, vertices) else {
            return Ok(ControlFlow::Continue(()));
        };
        let forest = forest.with_orientation(map);
        let hit = match options.mode {
            BoundMode::Free => Some(pinned_witness(net, forest)?),
            BoundMode::Fixed => fixed_witness(net, forest)?,
        };
        match hit {
            Some(cert) => {
                found = Some(cert);
                Ok(ControlFlow::Break(()))
            }
            None => Ok(ControlFlow::Continue(())),
        }
    })?;
    Ok(match found {
        Some(cert) => NondegeneracyVerdict::Degenerate(Box::new(cert)),
        None => NondegeneracyVerdict::NoCounterexample { examined },
    })
}

/// Pins the forest's elements at zero and frees everything else; the zero
/// flow then conforms and its active rows are exactly the forest's.
fn pinned_witness(net: &Network, forest: AlphaForest) -> Result<DegenerateCertificate, DegeneracyError> {
    let zero = || Interval::point(Rational::zero());
    let network = net
        .with_edge_bounds(|e, _| if forest.edges.contains(&e) { zero() } else { Interval::free() })?
        .with_vertex_bounds(|v, _| if forest.vertices.contains(&v) { zero() } else { Interval::free() })?;
    let flow = Flow::zero(&network);
    finish(network, forest, flow)
}

/// Tries every choice of sides for the forest's elements and looks for a
/// point of the resulting face that is not a vertex of it.
fn fixed_witness(net: &Network, forest: AlphaForest) -> Result<Option<DegenerateCertificate>, DegeneracyError> {
    let n = net.vertex_count();
    let elements = forest.elements();
    let sides: Vec<Vec<Rational>> = elements
        .iter()
        .map(|el| el.interval(net).finite_sides().into_iter().map(|(_, x)| x.clone()).collect())
        .collect();
    let mut pick = vec![0usize; elements.len()];
    loop {
        let mut face = Face::new(n);
        for (k, el) in elements.iter().enumerate() {
            face.pin(el.row(net), sides[k][pick[k]].clone());
        }
        for el in Element::all(net) {
            face.bound(el.row(net), el.interval(net).clone());
        }
        if let FaceShape::Positive(x) = face.shape() {
            let flow = Potential(x).flow(net);
            return finish(net.clone(), forest, flow).map(Some);
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return Ok(None);
            }
            pick[k] += 1;
            if pick[k] < sides[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

fn finish(network: Network, forest: AlphaForest, flow: Flow) -> Result<DegenerateCertificate, DegeneracyError> {
    if !conforms(&network, &flow, &forest)? {
        return Err(DegeneracyError::Internal("constructed flow does not conform".into()));
    }
    let extremality = polytope::is_extremal(&network, &flow)?;
    if extremality.is_extremal() {
        return Err(DegeneracyError::Internal("dependent alpha-tree produced an extreme point".into()));
    }
    extremality.verify(&network, &flow).map_err(DegeneracyError::Internal)?;
    Ok(DegenerateCertificate {
        network,
        alpha_tree: forest,
        flow,
        extremality,
    })
}
