//! Faces of the potential-space polyhedron: `phi_0 = 0`, a set of pinned
//! equalities, and interval constraints on linear forms.

use num_traits::{One, Zero};

use crate::matrix::{dot, RationalMatrix, RowSpace};
use crate::rational::{Interval, Rational};

#[derive(Debug, Clone)]
pub(crate) struct Face {
    n: usize,
    equalities: Vec<(Vec<Rational>, Rational)>,
    inequalities: Vec<(Vec<Rational>, Interval)>,
}

/// Coarse shape of a face, with a point that is not a vertex of the face
/// whenever the face has positive dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum FaceShape {
    Empty,
    Point(Vec<Rational>),
    Positive(Vec<Rational>),
}

impl Face {
    pub(crate) fn new(n: usize) -> Self {
        let mut gauge = vec![Rational::zero(); n];
        gauge[0] = Rational::one();
        Face {
            n,
            equalities: vec![(gauge, Rational::zero())],
            inequalities: Vec::new(),
        }
    }

    pub(crate) fn pin(&mut self, row: Vec<Rational>, value: Rational) {
        self.equalities.push((row, value));
    }

    pub(crate) fn bound(&mut self, row: Vec<Rational>, iv: Interval) {
        if iv.has_finite_side() {
            self.inequalities.push((row, iv));
        }
    }

    pub(crate) fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|(r, v)| &dot(r, x) == v)
            && self.inequalities.iter().all(|(r, iv)| iv.contains(&dot(r, x)))
    }

    /// Basis of the directions along which every constraint is constant.
    fn lineality(&self) -> Vec<Vec<Rational>> {
        let rows = self
            .equalities
            .iter()
            .map(|(r, _)| r.clone())
            .chain(self.inequalities.iter().map(|(r, _)| r.clone()))
            .collect();
        RationalMatrix::from_rows(self.n, rows).kernel_basis()
    }

    /// Up to `limit` distinct vertices, in search order.
    fn vertices(&self, limit: usize) -> Vec<Vec<Rational>> {
        let mut base = RowSpace::new(self.n);
        for (r, _) in &self.equalities {
            base.try_insert(r);
        }
        let mut out: Vec<Vec<Rational>> = Vec::new();
        let mut chosen = Vec::new();
        self.vertex_search(0, base, &mut chosen, limit, &mut out);
        out
    }

    fn vertex_search(
        &self,
        start: usize,
        space: RowSpace,
        chosen: &mut Vec<usize>,
        limit: usize,
        out: &mut Vec<Vec<Rational>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if space.rank() == self.n {
            self.solve_sides(chosen, limit, out);
            return;
        }
        for i in start..self.inequalities.len() {
            let mut next = space.clone();
            if !next.try_insert(&self.inequalities[i].0) {
                continue;
            }
            chosen.push(i);
            self.vertex_search(i + 1, next, chosen, limit, out);
            chosen.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    fn solve_sides(&self, chosen: &[usize], limit: usize, out: &mut Vec<Vec<Rational>>) {
        let sides: Vec<Vec<Rational>> = chosen
            .iter()
            .map(|&i| {
                self.inequalities[i]
                    .1
                    .finite_sides()
                    .into_iter()
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let mut pick = vec![0usize; chosen.len()];
        loop {
            let mut rows: Vec<Vec<Rational>> = self.equalities.iter().map(|(r, _)| r.clone()).collect();
            let mut rhs: Vec<Rational> = self.equalities.iter().map(|(_, v)| v.clone()).collect();
            for (k, &i) in chosen.iter().enumerate() {
                rows.push(self.inequalities[i].0.clone());
                rhs.push(sides[k][pick[k]].clone());
            }
            if let Some(x) = RationalMatrix::from_rows(self.n, rows).solve(&rhs) {
                if self.contains(&x) && !out.contains(&x) {
                    out.push(x);
                    if out.len() >= limit {
                        return;
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    return;
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

    /// A nonzero direction of the recession cone, if one exists. Assumes
    /// the face is pointed.
    fn ray(&self) -> Option<Vec<Rational>> {
        let mut base = RowSpace::new(self.n);
        for (r, _) in &self.equalities {
            base.try_insert(r);
        }
        let mut chosen = Vec::new();
        self.ray_search(0, base, &mut chosen)
    }

    fn in_cone(&self, r: &[Rational]) -> bool {
        self.equalities.iter().all(|(row, _)| dot(row, r).is_zero())
            && self.inequalities.iter().all(|(row, iv)| {
                let d = dot(row, r);
                (!iv.lo.is_finite() || d >= Rational::zero()) && (!iv.hi.is_finite() || d <= Rational::zero())
            })
    }

    fn ray_search(&self, start: usize, space: RowSpace, chosen: &mut Vec<usize>) -> Option<Vec<Rational>> {
        if space.rank() == self.n - 1 {
            let rows = self
                .equalities
                .iter()
                .map(|(r, _)| r.clone())
                .chain(chosen.iter().map(|&i| self.inequalities[i].0.clone()))
                .collect();
            let k = RationalMatrix::from_rows(self.n, rows).kernel_basis();
            let dir = k.into_iter().next()?;
            let neg: Vec<Rational> = dir.iter().map(|x| -x.clone()).collect();
            return [dir, neg].into_iter().find(|d| self.in_cone(d));
        }
        for i in start..self.inequalities.len() {
            let mut next = space.clone();
            if !next.try_insert(&self.inequalities[i].0) {
                continue;
            }
            chosen.push(i);
            let hit = self.ray_search(i + 1, next, chosen);
            chosen.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    pub(crate) fn shape(&self) -> FaceShape {
        let lineality = self.lineality();
        let mut pointed = self.clone();
        for l in &lineality {
            pointed.pin(l.clone(), Rational::zero());
        }
        let verts = pointed.vertices(2);
        let Some(first) = verts.first().cloned() else {
            return FaceShape::Empty;
        };
        if !lineality.is_empty() {
            return FaceShape::Positive(first);
        }
        if let Some(second) = verts.get(1) {
            let two = Rational::from_integer(2.into());
            let mid = first.iter().zip(second).map(|(a, b)| (a + b) / &two).collect();
            return FaceShape::Positive(mid);
        }
        if let Some(r) = pointed.ray() {
            let moved = first.iter().zip(&r).map(|(a, b)| a + b).collect();
            return FaceShape::Positive(moved);
        }
        FaceShape::Point(first)
    }
}
