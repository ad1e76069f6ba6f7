//! Cactus recognition by depth-first search.

use crate::graph::SimpleGraph;

use super::paths::{find_diamond_minor, DiamondMinor};
use super::DegeneracyError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusReport {
    pub is_cactus: bool,
    /// An edge lying on two distinct simple cycles.
    pub violating_edge: Option<usize>,
    pub diamond: Option<DiamondMinor>,
}

/// Linear-time test. Every back edge found by the search closes a cycle
/// with the tree path to its ancestor; the tree edges of that path are
/// marked, and an edge marked twice lies on two cycles.
pub fn is_cactus(g: &SimpleGraph) -> Result<CactusReport, DegeneracyError> {
    let n = g.vertex_count();
    if !g.is_connected() {
        return Err(DegeneracyError::Disconnected);
    }
    let mut depth = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut marked = vec![false; g.edge_count()];
    if n == 0 {
        return Ok(ok());
    }
    depth[0] = 0;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        let Some(&(u, e)) = g.neighbors(v).get(next) else {
            stack.pop();
            continue;
        };
        top.1 += 1;
        if e == parent_edge[v] {
            continue;
        }
        if depth[u] == usize::MAX {
            depth[u] = depth[v] + 1;
            parent_edge[u] = e;
            parent[u] = v;
            stack.push((u, 0));
        } else if depth[u] < depth[v] {
            marked[e] = true;
            let mut x = v;
            while x != u {
                let pe = parent_edge[x];
                if marked[pe] {
                    return Ok(CactusReport {
                        is_cactus: false,
                        violating_edge: Some(pe),
                        diamond: None,
                    });
                }
                marked[pe] = true;
                x = parent[x];
            }
        }
    }
    Ok(ok())
}

fn ok() -> CactusReport {
    CactusReport {
        is_cactus: true,
        violating_edge: None,
        diamond: None,
    }
}

/// [`is_cactus`] plus a diamond subdivision when the graph is not a cactus.
pub fn cactus_report(g: &SimpleGraph) -> Result<CactusReport, DegeneracyError> {
    let mut report = is_cactus(g)?;
    if !report.is_cactus {
        report.diamond = find_diamond_minor(g);
        if report.diamond.is_none() {
            return Err(DegeneracyError::Internal("non-cactus without a diamond".into()));
        }
    }
    Ok(report)
}
