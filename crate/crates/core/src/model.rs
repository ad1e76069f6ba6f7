//! Networks, flows, potentials and the matrices `A`, `B` and `AB^T`.
//!
//! Incidence convention: `A[v][e] = +1` if `e` ends at `v` and `-1` if it
//! starts there, so `B^T phi` gives `f_e = b_e (phi_head - phi_tail)` and
//! `-A f` is the net outflow (injection) of each vertex.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph::SimpleGraph;
use crate::matrix::RationalMatrix;
use crate::rational::{int, Interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("network has no vertices")]
    Empty,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} refers to unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {0:?} is a self-loop")]
    SelfLoop(String),
    #[error("edges {first:?} and {second:?} join the same pair of vertices")]
    NotAntiSymmetric { first: String, second: String },
    #[error("edge {0:?} has non-positive elasticity")]
    NonPositiveElasticity(String),
    #[error("edge {0:?} has malformed flow bounds")]
    MalformedEdgeBounds(String),
    #[error("vertex {0:?} has malformed injection bounds")]
    MalformedVertexBounds(String),
    #[error("underlying undirected graph is not connected")]
    Disconnected,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub p: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub b: Rational,
    pub f: Interval,
}

/// A validated network. Immutable; use the `with_*` methods to derive
/// variants with different data on the same graph.
#[derive(Debug, Clone)]
pub struct Network {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    pairs: HashMap<(usize, usize), usize>,
    graph: SimpleGraph,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Network {}

#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    vertices: Vec<Vertex>,
    edges: Vec<(String, String, String, Rational, Interval)>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, p: Interval) -> &mut Self {
        self.vertices.push(Vertex { id: id.into(), p });
        self
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        tail: impl Into<String>,
        head: impl Into<String>,
        b: Rational,
        f: Interval,
    ) -> &mut Self {
        self.edges
            .push((id.into(), tail.into(), head.into(), b, f));
        self
    }

    pub fn build(&self) -> Result<Network, ModelError> {
        let mut vertex_index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateVertex(v.id.clone()));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, tail, head, b, f) in &self.edges {
            let lookup = |name: &String| {
                vertex_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownVertex {
                        edge: id.clone(),
                        vertex: name.clone(),
                    })
            };
            edges.push(Edge {
                id: id.clone(),
                tail: lookup(tail)?,
                head: lookup(head)?,
                b: b.clone(),
                f: f.clone(),
            });
        }
        Network::from_parts(self.vertices.clone(), edges)
    }
}

impl Network {
    /// Validates and indexes already-resolved parts.
    pub fn from_parts(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Network, ModelError> {
        if vertices.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateVertex(v.id.clone()));
            }
            if !v.p.is_well_formed() {
                return Err(ModelError::MalformedVertexBounds(v.id.clone()));
            }
        }
        let n = vertices.len();
        let mut edge_index: HashMap<String, usize> = HashMap::with_capacity(edges.len());
        let mut pairs: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(ModelError::DuplicateEdge(e.id.clone()));
            }
            for end in [e.tail, e.head] {
                if end >= n {
                    return Err(ModelError::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: end.to_string(),
                    });
                }
            }
            if e.tail == e.head {
                return Err(ModelError::SelfLoop(e.id.clone()));
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if let Some(&j) = pairs.get(&key) {
                return Err(ModelError::NotAntiSymmetric {
                    first: edges[j].id.clone(),
                    second: e.id.clone(),
                });
            }
            pairs.insert(key, i);
            if !e.b.is_positive() {
                return Err(ModelError::NonPositiveElasticity(e.id.clone()));
            }
            if !e.f.is_well_formed() {
                return Err(ModelError::MalformedEdgeBounds(e.id.clone()));
            }
        }
        let graph = SimpleGraph::new(n, edges.iter().map(|e| (e.tail, e.head)).collect());
        if !graph.is_connected() {
            return Err(ModelError::Disconnected);
        }
        Ok(Network {
            vertices,
            edges,
            vertex_index,
            edge_index,
            pairs,
            graph,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    /// The edge joining `a` and `b` in either direction.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.pairs.get(&(a.min(b), a.max(b))).copied()
    }

    /// `(neighbor, edge)` pairs in edge input order.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        self.graph.neighbors(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn elasticities(&self) -> Vec<Rational> {
        self.edges.iter().map(|e| e.b.clone()).collect()
    }

    pub fn with_edge_bounds(&self, f: impl Fn(usize, &Edge) -> Interval) -> Result<Network, ModelError> {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| Edge {
                f: f(i, e),
                ..e.clone()
            })
            .collect();
        Network::from_parts(self.vertices.clone(), edges)
    }

    pub fn with_vertex_bounds(&self, p: impl Fn(usize, &Vertex) -> Interval) -> Result<Network, ModelError> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| Vertex {
                p: p(i, v),
                ..v.clone()
            })
            .collect();
        Network::from_parts(vertices, self.edges.clone())
    }

    pub fn with_elasticities(&self, b: Vec<Rational>) -> Result<Network, ModelError> {
        if b.len() != self.edges.len() {
            return Err(ModelError::LengthMismatch {
                expected: self.edges.len(),
                got: b.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(b)
            .map(|(e, b)| Edge { b, ..e.clone() })
            .collect();
        Network::from_parts(self.vertices.clone(), edges)
    }

    /// Same graph and elasticities with every bound infinite.
    pub fn unbounded(&self) -> Network {
        self.with_edge_bounds(|_, _| Interval::free())
            .and_then(|n| n.with_vertex_bounds(|_, _| Interval::free()))
            .expect("relaxing bounds keeps a network valid")
    }

    /// Row `e` of `B^T`: the linear form `phi -> f_e`.
    pub fn edge_row(&self, e: usize) -> Vec<Rational> {
        let edge = &self.edges[e];
        let mut row = vec![Rational::zero(); self.vertices.len()];
        row[edge.head] = edge.b.clone();
        row[edge.tail] = -edge.b.clone();
        row
    }

    /// Row `v` of `-AB^T`: the linear form `phi -> (-A B^T phi)_v`, the
    /// injection at `v`.
    pub fn injection_row(&self, v: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.vertices.len()];
        for &(u, e) in self.incident(v) {
            let b = &self.edges[e].b;
            row[u] += b;
            row[v] -= b;
        }
        row
    }

    pub fn edge_id_list(&self, edges: impl IntoIterator<Item = usize>) -> Vec<String> {
        edges.into_iter().map(|e| self.edges[e].id.clone()).collect()
    }

    pub fn vertex_id_list(&self, vertices: impl IntoIterator<Item = usize>) -> Vec<String> {
        vertices
            .into_iter()
            .map(|v| self.vertices[v].id.clone())
            .collect()
    }
}

/// Edge values in network edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flow(pub Vec<Rational>);

/// Vertex values in network vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Potential(pub Vec<Rational>);

impl Flow {
    pub fn zero(net: &Network) -> Flow {
        Flow(vec![Rational::zero(); net.edge_count()])
    }

    pub fn check_len(&self, net: &Network) -> Result<(), ModelError> {
        if self.0.len() == net.edge_count() {
            Ok(())
        } else {
            Err(ModelError::LengthMismatch {
                expected: net.edge_count(),
                got: self.0.len(),
            })
        }
    }
}

impl Potential {
    pub fn zero(net: &Network) -> Potential {
        Potential(vec![Rational::zero(); net.vertex_count()])
    }

    /// The differential flow `B^T phi`.
    pub fn flow(&self, net: &Network) -> Flow {
        Flow(
            net.edges()
                .iter()
                .map(|e| &e.b * (&self.0[e.head] - &self.0[e.tail]))
                .collect(),
        )
    }

    /// Shifted so the first entry is zero.
    pub fn gauged(&self) -> Potential {
        match self.0.first() {
            None => self.clone(),
            Some(base) => {
                let base = base.clone();
                Potential(self.0.iter().map(|x| x - &base).collect())
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn incidence_matrix(net: &Network) -> RationalMatrix {
    let mut a = RationalMatrix::zeros(net.vertex_count(), net.edge_count());
    for (i, e) in net.edges().iter().enumerate() {
        a.set(e.head, i, int(1));
        a.set(e.tail, i, int(-1));
    }
    a
}

/// `B = A diag(b)`.
pub fn elasticity_matrix(net: &Network) -> RationalMatrix {
    incidence_matrix(net).scale_columns(&net.elasticities())
}

/// The nodal admittance matrix `A B^T`.
pub fn admittance_matrix(net: &Network) -> RationalMatrix {
    incidence_matrix(net).mul(&elasticity_matrix(net).transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn k2(b: i64) -> Network {
        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free())
            .add_edge("e", "v", "w", int(b), Interval::free());
        nb.build().unwrap()
    }

    #[test]
    fn k2_matrices() {
        let net = k2(2);
        assert_eq!(
            incidence_matrix(&net),
            RationalMatrix::from_rows(1, vec![vec![int(-1)], vec![int(1)]])
        );
        assert_eq!(
            elasticity_matrix(&net),
            RationalMatrix::from_rows(1, vec![vec![int(-2)], vec![int(2)]])
        );
        assert_eq!(
            admittance_matrix(&k2(1)),
            RationalMatrix::from_rows(2, vec![vec![int(1), int(-1)], vec![int(-1), int(1)]])
        );
    }

    #[test]
    fn rows_agree_with_matrices() {
        let mut nb = NetworkBuilder::new();
        for v in ["a", "b", "c"] {
            nb.add_vertex(v, Interval::free());
        }
        nb.add_edge("ab", "a", "b", ratio(1, 2), Interval::free())
            .add_edge("bc", "b", "c", int(3), Interval::free())
            .add_edge("ac", "a", "c", int(5), Interval::free());
        let net = nb.build().unwrap();
        let bt = elasticity_matrix(&net).transpose();
        let y = admittance_matrix(&net);
        for e in 0..3 {
            assert_eq!(net.edge_row(e), bt.row(e));
        }
        for v in 0..3 {
            let neg: Vec<Rational> = y.row(v).iter().map(|x| -x.clone()).collect();
            assert_eq!(net.injection_row(v), neg);
        }
        assert!(y.is_symmetric());
    }

    #[test]
    fn validation_errors() {
        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free())
            .add_edge("e", "v", "w", int(1), Interval::free())
            .add_edge("f", "w", "v", int(1), Interval::free());
        assert!(matches!(nb.build(), Err(ModelError::NotAntiSymmetric { .. })));

        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free())
            .add_edge("e", "v", "w", int(0), Interval::free());
        assert!(matches!(nb.build(), Err(ModelError::NonPositiveElasticity(_))));

        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free());
        assert_eq!(nb.build(), Err(ModelError::Disconnected));

        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free())
            .add_edge("e", "v", "x", int(1), Interval::free());
        assert!(matches!(nb.build(), Err(ModelError::UnknownVertex { .. })));

        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::closed(int(1), int(0)));
        assert!(matches!(nb.build(), Err(ModelError::MalformedVertexBounds(_))));

        assert_eq!(NetworkBuilder::new().build(), Err(ModelError::Empty));
    }

    #[test]
    fn potential_flow_and_gauge() {
        let net = k2(2);
        let phi = Potential(vec![int(3), int(5)]);
        assert_eq!(phi.flow(&net), Flow(vec![int(4)]));
        assert_eq!(phi.gauged(), Potential(vec![int(0), int(2)]));
    }
}
