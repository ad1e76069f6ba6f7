//! Reduction of an independent active selection to a matrix over the
//! components of its active edges.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::graph::UnionFind;
use crate::matrix::RationalMatrix;
use crate::model::Network;
use crate::polytope::{element_matrix, Element};
use crate::rational::Rational;

use super::AlphaError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionResult {
    /// Vertex sets of the components of `(V, E*)`, each sorted, ordered by
    /// smallest member.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// The active vertices, one per row of `c`.
    pub row_index: Vec<usize>,
    /// Component per column of `c`.
    pub col_index: Vec<usize>,
    pub c: RationalMatrix,
}

/// Performs the row reduction: admittance rows of `vertices` are moved along
/// spanning trees of the components of `(V, edges)` onto the smallest vertex
/// of each component.
pub fn contract_active(
    net: &Network,
    edges: &BTreeSet<usize>,
    vertices: &BTreeSet<usize>,
) -> Result<ContractionResult, AlphaError> {
    let n = net.vertex_count();
    let elements: Vec<Element> = edges
        .iter()
        .map(|&e| Element::Edge(e))
        .chain(vertices.iter().map(|&v| Element::Vertex(v)))
        .collect();
    let rank = element_matrix(net, &elements).rank();
    if rank != n - 1 || elements.len() != n - 1 {
        return Err(AlphaError::RankPrecondition {
            rank,
            count: elements.len(),
            expected: n - 1,
        });
    }

    let mut uf = UnionFind::new(n);
    for &e in edges {
        uf.union(net.edge(e).tail, net.edge(e).head);
    }
    let component_of = uf.labels();
    let k1 = component_of.iter().max().map_or(0, |m| m + 1);
    let mut components = vec![Vec::new(); k1];
    for (v, &c) in component_of.iter().enumerate() {
        components[c].push(v);
    }

    // Reverse BFS order of each spanning tree, with the parent of each
    // non-root vertex.
    let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in edges {
        let edge = net.edge(e);
        tree_adj[edge.tail].push(edge.head);
        tree_adj[edge.head].push(edge.tail);
    }
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for comp in &components {
        let root = comp[0];
        let mut queue = VecDeque::from([root]);
        parent[root] = root;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &tree_adj[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
    }

    let row_index: Vec<usize> = vertices.iter().copied().collect();
    let mut rows = Vec::with_capacity(row_index.len());
    for &v in &row_index {
        let mut m: Vec<Rational> = net.injection_row(v).into_iter().map(|x| -x).collect();
        for &u in order.iter().rev() {
            if parent[u] != u && !m[u].is_zero() {
                let moved = std::mem::take(&mut m[u]);
                m[parent[u]] += moved;
            }
        }
        rows.push(components.iter().map(|comp| m[comp[0]].clone()).collect());
    }
    let c = RationalMatrix::from_rows(k1, rows);

    for (i, &v) in row_index.iter().enumerate() {
        let mut sum = Rational::zero();
        for j in 0..k1 {
            let x = c.get(i, j);
            sum += x;
            let member = component_of[v] == j;
            let adjacent = net.incident(v).iter().any(|&(u, _)| component_of[u] == j);
            let ok = if member {
                x.is_positive()
            } else if adjacent {
                x.is_negative()
            } else {
                x.is_zero()
            };
            if !ok {
                return Err(AlphaError::Internal(format!(
                    "contracted entry ({i}, {j}) has the wrong sign"
                )));
            }
        }
        if !sum.is_zero() {
            return Err(AlphaError::Internal(format!("contracted row {i} does not sum to zero")));
        }
    }
    if c.rank() != row_index.len() {
        return Err(AlphaError::Internal("contracted matrix lost rank".into()));
    }
    Ok(ContractionResult {
        components,
        component_of,
        row_index,
        col_index: (0..k1).collect(),
        c,
    })
}
