#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use diffflow::alpha::AlphaForest;
use diffflow::graph::{SimpleGraph, UnionFind};
use diffflow::matrix::RationalMatrix;
use diffflow::model::{Flow, Network, Potential};
use diffflow::polytope::{potential_feasible, Element};
use diffflow::Rational;
use num_traits::{One, Zero};

/// Simple cycles as edge sets, by backtracking from each smallest vertex.
pub fn simple_cycles(g: &SimpleGraph) -> BTreeSet<BTreeSet<usize>> {
    assert!(g.vertex_count() <= 10, "cycle oracle is capped at 10 vertices");
    fn walk(
        g: &SimpleGraph,
        start: usize,
        at: usize,
        on_path: &mut Vec<bool>,
        edges: &mut Vec<usize>,
        out: &mut BTreeSet<BTreeSet<usize>>,
    ) {
        for &(u, e) in g.neighbors(at) {
            if edges.last() == Some(&e) {
                continue;
            }
            if u == start && edges.len() >= 2 {
                let mut c: BTreeSet<usize> = edges.iter().copied().collect();
                c.insert(e);
                out.insert(c);
            } else if u > start && !on_path[u] {
                on_path[u] = true;
                edges.push(e);
                walk(g, start, u, on_path, edges, out);
                edges.pop();
                on_path[u] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.vertex_count() {
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        walk(g, s, s, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

/// No edge lies on two distinct simple cycles.
pub fn brute_cactus(g: &SimpleGraph) -> bool {
    let mut count = vec![0usize; g.edge_count()];
    for c in simple_cycles(g) {
        for e in c {
            count[e] += 1;
        }
    }
    count.iter().all(|&c| c <= 1)
}

/// Tries every injective assignment of incident non-active edges.
pub fn exhaustive_orientation(net: &Network, edges: &BTreeSet<usize>, vertices: &BTreeSet<usize>) -> bool {
    fn go(net: &Network, verts: &[usize], k: usize, used: &mut Vec<usize>, base: &BTreeSet<usize>) -> bool {
        if k == verts.len() {
            let mut uf = UnionFind::new(net.vertex_count());
            return base
                .iter()
                .chain(used.iter())
                .all(|&e| uf.union(net.edge(e).tail, net.edge(e).head));
        }
        for &(_, e) in net.incident(verts[k]) {
            if base.contains(&e) || used.contains(&e) {
                continue;
            }
            used.push(e);
            if go(net, verts, k + 1, used, base) {
                return true;
            }
            used.pop();
        }
        false
    }
    let verts: Vec<usize> = vertices.iter().copied().collect();
    go(net, &verts, 0, &mut Vec::new(), edges)
}

/// Connected graph on `n` vertices from a bitmask over vertex pairs.
pub fn graph_from_mask(n: usize, mask: u64) -> SimpleGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask & (1 << bit) != 0 {
                edges.push((a, b));
            }
            bit += 1;
        }
    }
    SimpleGraph::new(n, edges)
}

/// Every feasible flow obtained by putting each element of a full-rank
/// forest at one of its finite bounds and solving the equalities.
/// Returns `None` when the forest's rows are dependent.
pub fn conforming_points(net: &Network, forest: &AlphaForest) -> Option<Vec<Flow>> {
    let n = net.vertex_count();
    let elements = forest.elements();
    let mut rows: Vec<Vec<Rational>> = elements.iter().map(|el| el.row(net)).collect();
    let mut gauge = vec![Rational::zero(); n];
    gauge[0] = Rational::one();
    rows.push(gauge);
    let inv = RationalMatrix::from_rows(n, rows).inverse()?;
    let sides: Vec<Vec<Rational>> = elements
        .iter()
        .map(|el| el.interval(net).finite_sides().into_iter().map(|(_, x)| x.clone()).collect())
        .collect();
    let mut phis = vec![vec![Rational::zero(); n]];
    for (k, values) in sides.iter().enumerate() {
        let col = inv.column(k);
        let mut next = Vec::new();
        for phi in &phis {
            for x in values {
                next.push(phi.iter().zip(&col).map(|(p, c)| p + x * c).collect::<Vec<_>>());
            }
        }
        phis = next;
    }
    Some(
        phis.into_iter()
            .map(Potential)
            .filter(|phi| potential_feasible(net, phi))
            .map(|phi| phi.flow(net))
            .collect(),
    )
}

/// Maximum size of an alpha-forest whose elements are all active for `f`,
/// by brute force over subsets of the active elements.
pub fn max_conforming_forest(net: &Network, active: &[Element]) -> usize {
    let k = active.len();
    let mut best = 0;
    for mask in 0u32..1 << k {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut edges = BTreeSet::new();
        let mut vertices = BTreeSet::new();
        for (i, el) in active.iter().enumerate() {
            if mask & (1 << i) != 0 {
                match *el {
                    Element::Edge(e) => edges.insert(e),
                    Element::Vertex(v) => vertices.insert(v),
                };
            }
        }
        let mut uf = UnionFind::new(net.vertex_count());
        if !edges.iter().all(|&e| uf.union(net.edge(e).tail, net.edge(e).head)) {
            continue;
        }
        if exhaustive_orientation(net, &edges, &vertices) {
            best = size;
        }
    }
    best
}

pub fn orientation_map(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
    pairs.iter().copied().collect()
}
