//! The bipartite link graph between active vertices and components.

use std::collections::BTreeSet;

use num_traits::Signed;

use super::{AlphaError, ContractionResult};

/// `W` indexes active vertices (`w[i]` is the network vertex), `S` the
/// components `0..s_count`. `r` holds one membership edge per `W`-node and
/// `u` the adjacency edges, both as `(i, j)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteLinkGraph {
    pub w: Vec<usize>,
    pub s_count: usize,
    pub r: Vec<(usize, usize)>,
    pub u: BTreeSet<(usize, usize)>,
}

impl BipartiteLinkGraph {
    fn neighborhoods(&self, u: &BTreeSet<(usize, usize)>) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.w.len()];
        for &(i, j) in self.r.iter().chain(u) {
            out[i].push(j);
        }
        out
    }

    /// Connected as a graph on `W + S` using `r` and the given `u` edges.
    pub fn connects(&self, u: &BTreeSet<(usize, usize)>) -> bool {
        let total = self.w.len() + self.s_count;
        let mut uf = crate::graph::UnionFind::new(total);
        for &(i, j) in self.r.iter().chain(u) {
            uf.union(i, self.w.len() + j);
        }
        (0..total).all(|x| uf.same(0, x))
    }
}

pub fn build_link_graph(cr: &ContractionResult) -> Result<BipartiteLinkGraph, AlphaError> {
    let k = cr.row_index.len();
    let s_count = cr.col_index.len();
    if s_count != k + 1 {
        return Err(AlphaError::Internal(format!("{s_count} components for {k} active vertices")));
    }
    let mut r = Vec::with_capacity(k);
    let mut u = BTreeSet::new();
    for i in 0..k {
        let mut members = 0;
        for j in 0..s_count {
            let x = cr.c.get(i, j);
            if x.is_positive() {
                r.push((i, j));
                members += 1;
            } else if x.is_negative() {
                u.insert((i, j));
            }
        }
        if members != 1 {
            return Err(AlphaError::Internal(format!("row {i} has {members} positive entries")));
        }
    }
    let h = BipartiteLinkGraph {
        w: cr.row_index.clone(),
        s_count,
        r,
        u,
    };
    if let Some(bad) = hall_violation(&h, &h.u) {
        return Err(AlphaError::HallViolated(bad.into_iter().map(|i| h.w[i]).collect()));
    }
    Ok(h)
}

const BRUTE_FORCE_LIMIT: usize = 20;

/// A nonempty `W' ⊆ W` with `|N(W')| <= |W'|`, using membership edges and
/// the given adjacency edges. Subsets are enumerated for small `W`; beyond
/// that the condition is decided by matchings and the subset is left empty.
pub fn hall_violation(h: &BipartiteLinkGraph, u: &BTreeSet<(usize, usize)>) -> Option<Vec<usize>> {
    let nbrs = h.neighborhoods(u);
    let k = h.w.len();
    if k <= BRUTE_FORCE_LIMIT && h.s_count <= 64 {
        let masks: Vec<u64> = nbrs
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &j| m | (1 << j)))
            .collect();
        for subset in 1u32..(1u32 << k) {
            let mut union = 0u64;
            for (i, m) in masks.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    union |= m;
                }
            }
            if union.count_ones() <= subset.count_ones() {
                return Some((0..k).filter(|&i| subset & (1 << i) != 0).collect());
            }
        }
        return None;
    }
    for removed in 0..h.s_count {
        if !saturating_matching_exists(&nbrs, h.s_count, removed) {
            return Some(Vec::new());
        }
    }
    None
}

/// Kuhn's augmenting paths with `removed` deleted from the right side.
fn saturating_matching_exists(nbrs: &[Vec<usize>], s_count: usize, removed: usize) -> bool {
    fn augment(i: usize, nbrs: &[Vec<usize>], removed: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &nbrs[i] {
            if j == removed || seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, nbrs, removed, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; s_count];
    (0..nbrs.len()).all(|i| {
        let mut seen = vec![false; s_count];
        augment(i, nbrs, removed, &mut seen, &mut owner)
    })
}

/// Thins `u` to one edge per `W`-node so that membership plus the kept
/// edges form a spanning tree. While some node has two or more adjacency
/// edges, its smallest edge is dropped if the surplus condition survives,
/// and its second smallest otherwise.
pub fn select_connecting_edges(h: &BipartiteLinkGraph) -> Result<BTreeSet<(usize, usize)>, AlphaError> {
    if hall_violation(h, &h.u).is_some() {
        return Err(AlphaError::InvalidForest("link graph fails the surplus condition".into()));
    }
    let mut u = h.u.clone();
    loop {
        let busy = (0..h.w.len()).find_map(|i| {
            let mut mine = u.range((i, 0)..(i + 1, 0));
            match (mine.next(), mine.next()) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            }
        });
        let Some((e1, e2)) = busy else {
            break;
        };
        u.remove(&e1);
        if hall_violation(h, &u).is_some() {
            u.insert(e1);
            u.remove(&e2);
            if hall_violation(h, &u).is_some() {
                return Err(AlphaError::Internal("neither adjacency edge can be dropped".into()));
            }
        }
    }
    if u.len() != h.w.len() || !h.connects(&u) {
        return Err(AlphaError::Internal("selected edges do not form a tree".into()));
    }
    Ok(u)
}
