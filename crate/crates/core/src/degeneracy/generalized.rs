//! Generalized differential flows on a finite ground set.

use num_traits::{Signed, Zero};

use crate::graph::Digraph;
use crate::matrix::RationalMatrix;
use crate::model::Potential;
use crate::rational::Rational;

use super::DegeneracyError;

/// Nonnegative weights `b'[v][w]` on ordered pairs; the diagonal is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedElasticity {
    b: Vec<Vec<Rational>>,
}

impl GeneralizedElasticity {
    pub fn zeros(n: usize) -> Self {
        GeneralizedElasticity {
            b: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn from_rows(b: Vec<Vec<Rational>>) -> Result<Self, DegeneracyError> {
        let n = b.len();
        for (v, row) in b.iter().enumerate() {
            if row.len() != n {
                return Err(DegeneracyError::Precondition(format!("row {v} has {} entries, expected {n}", row.len())));
            }
            if let Some(w) = row.iter().position(Signed::is_negative) {
                return Err(DegeneracyError::NegativeElasticity(v, w));
            }
        }
        Ok(GeneralizedElasticity { b })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn get(&self, v: usize, w: usize) -> &Rational {
        &self.b[v][w]
    }

    pub fn set(&mut self, v: usize, w: usize, x: Rational) -> Result<(), DegeneracyError> {
        if x.is_negative() {
            return Err(DegeneracyError::NegativeElasticity(v, w));
        }
        self.b[v][w] = x;
        Ok(())
    }

    /// Arcs `v -> w` with `b'[v][w] > 0`.
    pub fn support(&self) -> Digraph {
        let n = self.len();
        Digraph::from_arcs(
            n,
            (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).filter(|&(v, w)| v != w && self.b[v][w].is_positive()),
        )
    }

    /// Row `v` maps `phi` to `sum_w b'[v][w] (phi_w - phi_v)`.
    pub fn constraint_matrix(&self) -> RationalMatrix {
        let n = self.len();
        let mut m = RationalMatrix::zeros(n, n);
        for v in 0..n {
            let mut diag = Rational::zero();
            for w in (0..n).filter(|&w| w != v) {
                m.set(v, w, self.b[v][w].clone());
                diag -= &self.b[v][w];
            }
            m.set(v, v, diag);
        }
        m
    }
}

/// Every vertex balances: `sum_w b'[v][w] (phi_w - phi_v) = 0`.
pub fn generalized_flow_feasible(b: &GeneralizedElasticity, phi: &Potential) -> bool {
    phi.0.len() == b.len() && b.constraint_matrix().mul_vec(&phi.0).iter().all(Zero::is_zero)
}

/// A spanning anti-arborescence: one out-arc per non-sink vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntiArborescence {
    pub sink: usize,
    pub arcs: Vec<(usize, usize)>,
}

/// The smallest sink reached by every vertex, with a breadth-first
/// in-tree towards it.
pub fn has_spanning_anti_arborescence(d: &Digraph) -> Option<AntiArborescence> {
    let n = d.vertex_count();
    if n == 0 {
        return None;
    }
    let rev = d.reversed();
    for sink in 0..n {
        let mut next = vec![usize::MAX; n];
        next[sink] = sink;
        let mut queue = std::collections::VecDeque::from([sink]);
        while let Some(x) = queue.pop_front() {
            for &y in rev.successors(x) {
                if next[y] == usize::MAX {
                    next[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if next.iter().all(|&x| x != usize::MAX) {
            let arcs = (0..n).filter(|&v| v != sink).map(|v| (v, next[v])).collect();
            return Some(AntiArborescence { sink, arcs });
        }
    }
    None
}
