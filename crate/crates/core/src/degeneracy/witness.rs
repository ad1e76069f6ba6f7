//! Explicit degenerate networks on graphs that are not cacti.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::alpha::{conforms, is_alpha_tree, AlphaForest};
use crate::graph::SimpleGraph;
use crate::model::{Flow, Network, Potential};
use crate::polytope::{self, imbalance, is_feasible};
use crate::rational::{int, Interval, Rational};

use super::cactus::is_cactus;
use super::paths::{find_diamond_minor, DiamondMinor};
use super::DegeneracyError;

/// Which of the three trees covers a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    W,
    S,
    T,
}

impl Part {
    pub fn potential(self) -> Rational {
        match self {
            Part::W => Rational::zero(),
            Part::S => Rational::one(),
            Part::T => -Rational::one(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Part::W => "W",
            Part::S => "S",
            Part::T => "T",
        }
    }
}

/// A network with a conforming alpha-tree whose flow `0` is not extremal.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyWitness {
    pub network: Network,
    pub alpha_tree: AlphaForest,
    pub flow: Flow,
    pub direction: Potential,
    pub partition: Vec<Part>,
    pub minor: DiamondMinor,
}

impl DegeneracyWitness {
    pub fn verify(&self) -> Result<(), String> {
        let net = &self.network;
        let n = net.vertex_count();
        if self.flow.0.iter().any(|x| !x.is_zero()) {
            return Err("flow is not identically zero".into());
        }
        if self.partition.len() != n || self.direction.0.len() != n {
            return Err("partition or direction has the wrong length".into());
        }
        for (v, part) in self.partition.iter().enumerate() {
            if self.direction.0[v] != part.potential() {
                return Err(format!("direction at {:?} does not match its part", net.vertex(v).id));
            }
        }
        match is_alpha_tree(net, &self.alpha_tree) {
            Ok(true) => {}
            Ok(false) => return Err("forest is not maximal".into()),
            Err(e) => return Err(e.to_string()),
        }
        if !conforms(net, &self.flow, &self.alpha_tree).map_err(|e| e.to_string())? {
            return Err("flow does not conform to the alpha-tree".into());
        }
        let cert = polytope::is_extremal(net, &self.flow).map_err(|e| e.to_string())?;
        if cert.is_extremal() {
            return Err("flow is extremal".into());
        }
        cert.verify(net, &self.flow)?;
        let g = self.direction.flow(net);
        if g.0.iter().all(Zero::is_zero) {
            return Err("direction induces the zero flow".into());
        }
        if let Some(&e) = self.alpha_tree.edges.iter().find(|&&e| !g.0[e].is_zero()) {
            return Err(format!("direction moves tree edge {:?}", net.edge(e).id));
        }
        let q = imbalance(net, &g);
        for v in [self.minor.v, self.minor.w] {
            if !q[v].is_zero() {
                return Err(format!("direction changes the injection at {:?}", net.vertex(v).id));
            }
        }
        let minus = Flow(g.0.iter().map(|x| -x).collect());
        if !is_feasible(net, &g) || !is_feasible(net, &minus) {
            return Err("f +- g is not feasible".into());
        }
        Ok(())
    }
}

/// Internal vertices and edges of a path from `v`.
fn interior(g: &SimpleGraph, m: &DiamondMinor, i: usize) -> (Vec<usize>, Vec<usize>) {
    let verts = m.path_vertices(g, i);
    let edges = &m.paths[i];
    (verts[1..verts.len() - 1].to_vec(), edges[1..edges.len() - 1].to_vec())
}

/// Grows a tree from the seed by repeatedly adding the smallest edge that
/// reaches an uncovered, unforbidden vertex.
fn grow(g: &SimpleGraph, cover: &mut [Option<Part>], part: Part, forbidden: &[bool], edges: &mut Vec<usize>) {
    'scan: loop {
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            for (inside, outside) in [(a, b), (b, a)] {
                if cover[inside] == Some(part) && cover[outside].is_none() && !forbidden[outside] {
                    cover[outside] = Some(part);
                    edges.push(e);
                    continue 'scan;
                }
            }
        }
        break;
    }
}

/// The witness for a non-cactus graph; `None` for cacti. Bounds and
/// elasticities of the input are replaced.
pub fn build_degeneracy_witness(net: &Network) -> Result<Option<DegeneracyWitness>, DegeneracyError> {
    let g = net.graph();
    if is_cactus(g)?.is_cactus {
        return Ok(None);
    }
    let minor = find_diamond_minor(g).ok_or_else(|| DegeneracyError::Internal("non-cactus without a diamond".into()))?;
    minor.check(g).map_err(DegeneracyError::Internal)?;
    let n = g.vertex_count();
    let (v, w) = (minor.v, minor.w);
    let (s_verts, s_edges) = interior(g, &minor, 1);
    let (t_verts, t_edges) = interior(g, &minor, 2);

    let mut cover: Vec<Option<Part>> = vec![None; n];
    let mut forbidden = vec![false; n];
    for &x in s_verts.iter().chain(&t_verts) {
        forbidden[x] = true;
    }
    for x in minor.path_vertices(g, 0) {
        cover[x] = Some(Part::W);
    }
    let mut w_edges = minor.paths[0].clone();
    grow(g, &mut cover, Part::W, &forbidden, &mut w_edges);

    let mut forbidden = vec![false; n];
    for &x in &t_verts {
        forbidden[x] = true;
    }
    for &x in &s_verts {
        cover[x] = Some(Part::S);
    }
    let mut s_tree = s_edges;
    grow(g, &mut cover, Part::S, &forbidden, &mut s_tree);

    for &x in &t_verts {
        cover[x] = Some(Part::T);
    }
    let mut t_tree = t_edges;
    grow(g, &mut cover, Part::T, &vec![false; n], &mut t_tree);

    let partition: Vec<Part> = cover
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| DegeneracyError::Internal("trees do not cover every vertex".into()))?;

    // Elasticities balancing the S- and T-sides at v and at w.
    let mut b = vec![int(1); g.edge_count()];
    for branch in [v, w] {
        let side = |part: Part| -> Vec<usize> {
            let mut es: Vec<usize> = g
                .neighbors(branch)
                .iter()
                .filter(|&&(u, _)| partition[u] == part)
                .map(|&(_, e)| e)
                .collect();
            es.sort_unstable();
            es
        };
        let (to_s, to_t) = (side(Part::S), side(Part::T));
        if to_s.is_empty() || to_t.is_empty() {
            return Err(DegeneracyError::Internal("branch vertex misses a side".into()));
        }
        let (short, diff) = if to_s.len() < to_t.len() {
            (to_s[0], to_t.len() - to_s.len())
        } else {
            (to_t[0], to_s.len() - to_t.len())
        };
        b[short] += int(diff as i64);
    }

    let mut tree_edges = vec![false; g.edge_count()];
    for &e in w_edges.iter().chain(&s_tree).chain(&t_tree) {
        tree_edges[e] = true;
    }
    let network = net
        .with_elasticities(b)?
        .with_edge_bounds(|e, _| {
            if tree_edges[e] {
                Interval::point(Rational::zero())
            } else {
                Interval::free()
            }
        })?
        .with_vertex_bounds(|x, _| {
            if x == v || x == w {
                Interval::point(Rational::zero())
            } else {
                Interval::free()
            }
        })?;
    let orientation = BTreeMap::from([
        (v, minor.paths[1][0]),
        (w, *minor.paths[2].last().expect("paths are nonempty")),
    ]);
    let alpha_tree = AlphaForest::new((0..g.edge_count()).filter(|&e| tree_edges[e]), [v, w])
        .with_orientation(orientation);
    let witness = DegeneracyWitness {
        flow: Flow::zero(&network),
        direction: Potential(partition.iter().map(|p| p.potential()).collect()),
        network,
        alpha_tree,
        partition,
        minor,
    };
    witness.verify().map_err(DegeneracyError::Internal)?;
    Ok(Some(witness))
}
