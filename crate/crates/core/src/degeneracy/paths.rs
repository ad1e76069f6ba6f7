//! Diamond subdivisions via internally vertex-disjoint paths.

use std::collections::VecDeque;

use crate::graph::SimpleGraph;

/// Branch vertices `v`, `w` and three internally vertex-disjoint `v`-`w`
/// paths, each an edge list ordered from `v` to `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondMinor {
    pub v: usize,
    pub w: usize,
    pub paths: [Vec<usize>; 3],
}

impl DiamondMinor {
    /// Vertices of path `i` from `v` to `w`.
    pub fn path_vertices(&self, g: &SimpleGraph, i: usize) -> Vec<usize> {
        let mut out = vec![self.v];
        let mut at = self.v;
        for &e in &self.paths[i] {
            at = g.other(e, at);
            out.push(at);
        }
        out
    }

    pub fn check(&self, g: &SimpleGraph) -> Result<(), String> {
        let mut seen = vec![false; g.vertex_count()];
        let mut long = 0;
        for i in 0..3 {
            let mut at = self.v;
            for &e in &self.paths[i] {
                let (a, b) = g.endpoints(e);
                if a != at && b != at {
                    return Err(format!("path {i} is not contiguous"));
                }
                at = g.other(e, at);
            }
            if at != self.w {
                return Err(format!("path {i} does not end at the second branch vertex"));
            }
            let verts = self.path_vertices(g, i);
            for &x in &verts[1..verts.len() - 1] {
                if x == self.v || x == self.w || seen[x] {
                    return Err(format!("path {i} shares vertex {x}"));
                }
                seen[x] = true;
            }
            if self.paths[i].len() >= 2 {
                long += 1;
            }
        }
        if long < 2 {
            return Err("fewer than two paths of length at least two".into());
        }
        Ok(())
    }
}

struct Arc {
    to: usize,
    cap: u8,
    rev: usize,
    edge: Option<usize>,
}

fn add_arc(net: &mut [Vec<Arc>], a: usize, b: usize, cap: u8, edge: Option<usize>) {
    let ra = net[b].len();
    let rb = net[a].len();
    net[a].push(Arc { to: b, cap, rev: ra, edge });
    net[b].push(Arc { to: a, cap: 0, rev: rb, edge: None });
}

/// Up to three internally vertex-disjoint `v`-`w` paths by unit-capacity
/// augmenting paths on the vertex-split graph.
fn disjoint_paths(g: &SimpleGraph, v: usize, w: usize) -> Option<[Vec<usize>; 3]> {
    let n = g.vertex_count();
    // Node x splits into 2x (in) and 2x+1 (out).
    let mut net: Vec<Vec<Arc>> = (0..2 * n).map(|_| Vec::new()).collect();
    for x in 0..n {
        if x != v && x != w {
            add_arc(&mut net, 2 * x, 2 * x + 1, 1, None);
        }
    }
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        for (p, q) in [(a, b), (b, a)] {
            if q == v || p == w {
                continue;
            }
            add_arc(&mut net, 2 * p + 1, 2 * q, 1, Some(e));
        }
    }
    let (source, sink) = (2 * v + 1, 2 * w);
    for _ in 0..3 {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; 2 * n];
        let mut queue = VecDeque::from([source]);
        let mut reached = false;
        while let Some(x) = queue.pop_front() {
            if x == sink {
                reached = true;
                break;
            }
            for (i, arc) in net[x].iter().enumerate() {
                if arc.cap > 0 && arc.to != source && prev[arc.to].is_none() {
                    prev[arc.to] = Some((x, i));
                    queue.push_back(arc.to);
                }
            }
        }
        if !reached {
            return None;
        }
        let mut y = sink;
        while y != source {
            let (x, i) = prev[y].expect("path to sink is recorded");
            net[x][i].cap -= 1;
            let (to, rev) = (net[x][i].to, net[x][i].rev);
            net[to][rev].cap += 1;
            y = x;
        }
    }
    // Net direction of flow per undirected edge.
    let mut used = vec![0i8; g.edge_count()];
    for (x, arcs) in net.iter().enumerate() {
        for arc in arcs {
            if let (Some(e), 0) = (arc.edge, arc.cap) {
                let p = x / 2;
                let forward = g.endpoints(e).0 == p;
                used[e] += if forward { 1 } else { -1 };
            }
        }
    }
    let out_edges = |x: usize| -> Vec<(usize, usize)> {
        g.neighbors(x)
            .iter()
            .filter(|&&(_, e)| {
                let forward = g.endpoints(e).0 == x;
                (forward && used[e] > 0) || (!forward && used[e] < 0)
            })
            .copied()
            .collect()
    };
    let mut paths: Vec<Vec<usize>> = Vec::with_capacity(3);
    for (first, e0) in out_edges(v) {
        let mut path = vec![e0];
        let mut at = first;
        while at != w {
            let (next, e) = out_edges(at)[0];
            path.push(e);
            at = next;
        }
        paths.push(path);
    }
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    paths.try_into().ok()
}

/// A subdivided diamond: the first pair of branch vertices (by index) of
/// degree at least three joined by three internally vertex-disjoint paths.
/// Paths are sorted by length, then by edge ids.
pub fn find_diamond_minor(g: &SimpleGraph) -> Option<DiamondMinor> {
    let n = g.vertex_count();
    let branch: Vec<usize> = (0..n).filter(|&x| g.degree(x) >= 3).collect();
    for (i, &v) in branch.iter().enumerate() {
        for &w in &branch[i + 1..] {
            if let Some(paths) = disjoint_paths(g, v, w) {
                return Some(DiamondMinor { v, w, paths });
            }
        }
    }
    None
}
