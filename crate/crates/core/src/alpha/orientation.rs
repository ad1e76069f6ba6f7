//! Search for vertex-orientation maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::UnionFind;
use crate::model::Network;

/// An injective map sending every vertex of `vertices` to an incident edge
/// outside `edges` such that `edges` together with the image is acyclic.
///
/// Backtracks over vertices in decreasing degree order, keeping a
/// union-find of the forest built so far; an edge is only tried when it
/// joins two different trees, which also makes the map injective.
pub fn find_orientation(
    net: &Network,
    edges: &BTreeSet<usize>,
    vertices: &BTreeSet<usize>,
) -> Option<BTreeMap<usize, usize>> {
    let mut uf = UnionFind::new(net.vertex_count());
    for &e in edges {
        let edge = net.edge(e);
        if !uf.union(edge.tail, edge.head) {
            return None;
        }
    }
    if edges.len() + vertices.len() + 1 > net.vertex_count() {
        return None;
    }
    let mut order: Vec<usize> = vertices.iter().copied().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(net.degree(v)), v));
    let mut assigned = Vec::with_capacity(order.len());
    if assign(net, edges, &order, uf, &mut assigned) {
        Some(order.into_iter().zip(assigned).collect())
    } else {
        None
    }
}

fn assign(
    net: &Network,
    edges: &BTreeSet<usize>,
    order: &[usize],
    uf: UnionFind,
    assigned: &mut Vec<usize>,
) -> bool {
    let Some(&v) = order.get(assigned.len()) else {
        return true;
    };
    for &(u, e) in net.incident(v) {
        if edges.contains(&e) {
            continue;
        }
        let mut next = uf.clone();
        if !next.union(v, u) {
            continue;
        }
        assigned.push(e);
        if assign(net, edges, order, next, assigned) {
            return true;
        }
        assigned.pop();
    }
    false
}
