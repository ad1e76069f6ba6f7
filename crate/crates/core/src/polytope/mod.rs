//! Membership, activity and extremality in the differential-flow polytope.
//!
//! Everything is computed in potential space: a flow `f = B^T phi` is
//! described by `phi` with the gauge `phi_0 = 0`, and the constraint rows are
//! the edge rows of `B^T` and the injection rows of `-AB^T`.

mod system;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{RationalMatrix, RowSpace};
use crate::model::{Flow, ModelError, Network, Potential};
use crate::rational::{int, Interval, Rational, Side};

pub(crate) use system::{Face, FaceShape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("flow is infeasible: {0}")]
    Infeasible(String),
    #[error("{what} limit of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: usize },
}

/// An edge or vertex constraint. Edges order before vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Edge(usize),
    Vertex(usize),
}

impl Element {
    /// The linear form in `phi` this element constrains.
    pub fn row(self, net: &Network) -> Vec<Rational> {
        match self {
            Element::Edge(e) => net.edge_row(e),
            Element::Vertex(v) => net.injection_row(v),
        }
    }

    pub fn interval(self, net: &Network) -> &Interval {
        match self {
            Element::Edge(e) => &net.edge(e).f,
            Element::Vertex(v) => &net.vertex(v).p,
        }
    }

    pub fn id(self, net: &Network) -> &str {
        match self {
            Element::Edge(e) => &net.edge(e).id,
            Element::Vertex(v) => &net.vertex(v).id,
        }
    }

    /// All elements, edges first, each in input order.
    pub fn all(net: &Network) -> Vec<Element> {
        (0..net.edge_count())
            .map(Element::Edge)
            .chain((0..net.vertex_count()).map(Element::Vertex))
            .collect()
    }
}

/// Per-vertex outflow minus inflow, i.e. `-A f`.
pub fn imbalance(net: &Network, f: &Flow) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); net.vertex_count()];
    for (e, x) in net.edges().iter().zip(&f.0) {
        out[e.tail] += x;
        out[e.head] -= x;
    }
    out
}

/// A potential inducing `f`, gauged to zero at the first vertex, or `None`
/// when `f / b` has nonzero sum around some cycle.
pub fn recover_potential(net: &Network, f: &Flow) -> Option<Potential> {
    let (phi, bad) = spanning_potential(net, f);
    match bad {
        None => Some(phi),
        Some(_) => None,
    }
}

/// Potential along a BFS tree rooted at vertex 0 plus the first edge (in
/// input order) that disagrees with it.
fn spanning_potential(net: &Network, f: &Flow) -> (Potential, Option<usize>) {
    let n = net.vertex_count();
    let mut phi: Vec<Option<Rational>> = vec![None; n];
    phi[0] = Some(Rational::zero());
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let pv = phi[v].clone().expect("queued vertices are labelled");
        for &(u, e) in net.incident(v) {
            if phi[u].is_some() {
                continue;
            }
            let edge = net.edge(e);
            let drop = &f.0[e] / &edge.b;
            phi[u] = Some(if edge.tail == v { &pv + drop } else { &pv - drop });
            queue.push_back(u);
        }
    }
    let phi = Potential(phi.into_iter().map(|x| x.expect("network is connected")).collect());
    let induced = phi.flow(net);
    let bad = (0..net.edge_count()).find(|&e| induced.0[e] != f.0[e]);
    (phi, bad)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The flow on this edge is inconsistent with the potential determined
    /// by a spanning tree.
    NotDifferential { edge: usize },
    EdgeBound { edge: usize, side: Side, value: Rational },
    VertexBound { vertex: usize, side: Side, value: Rational },
}

impl Violation {
    pub fn describe(&self, net: &Network) -> String {
        let side = |s: &Side| match s {
            Side::Lower => "below lower bound",
            Side::Upper => "above upper bound",
        };
        match self {
            Violation::NotDifferential { edge } => {
                format!("flow on edge {:?} is not induced by any potential", net.edge(*edge).id)
            }
            Violation::EdgeBound { edge, side: s, value } => format!(
                "edge {:?} flow {} is {} {}",
                net.edge(*edge).id,
                crate::rational::format_rational(value),
                side(s),
                net.edge(*edge).f
            ),
            Violation::VertexBound { vertex, side: s, value } => format!(
                "vertex {:?} injection {} is {} {}",
                net.vertex(*vertex).id,
                crate::rational::format_rational(value),
                side(s),
                net.vertex(*vertex).p
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub potential: Option<Potential>,
    pub injection: Vec<Rational>,
    pub violation: Option<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violation.is_none()
    }
}

fn side_violation(iv: &Interval, x: &Rational) -> Option<Side> {
    if !iv.above_lower(x) {
        Some(Side::Lower)
    } else if !iv.below_upper(x) {
        Some(Side::Upper)
    } else {
        None
    }
}

/// Checks the differential condition, then edge bounds, then vertex bounds,
/// and reports the first violation in that order.
pub fn check_feasible(net: &Network, f: &Flow) -> Result<FeasibilityReport, ModelError> {
    f.check_len(net)?;
    let injection = imbalance(net, f);
    let (phi, bad) = spanning_potential(net, f);
    let mut violation = bad.map(|edge| Violation::NotDifferential { edge });
    if violation.is_none() {
        violation = net.edges().iter().enumerate().find_map(|(e, edge)| {
            side_violation(&edge.f, &f.0[e]).map(|side| Violation::EdgeBound {
                edge: e,
                side,
                value: f.0[e].clone(),
            })
        });
    }
    if violation.is_none() {
        violation = net.vertices().iter().enumerate().find_map(|(v, vx)| {
            side_violation(&vx.p, &injection[v]).map(|side| Violation::VertexBound {
                vertex: v,
                side,
                value: injection[v].clone(),
            })
        });
    }
    let potential = match violation {
        Some(Violation::NotDifferential { .. }) => None,
        _ => Some(phi),
    };
    Ok(FeasibilityReport {
        potential,
        injection,
        violation,
    })
}

pub fn is_feasible(net: &Network, f: &Flow) -> bool {
    check_feasible(net, f).map(|r| r.is_feasible()).unwrap_or(false)
}

/// Feasibility of the flow induced by `phi`.
pub fn potential_feasible(net: &Network, phi: &Potential) -> bool {
    let f = phi.flow(net);
    net.edges().iter().zip(&f.0).all(|(e, x)| e.f.contains(x))
        && net
            .vertices()
            .iter()
            .zip(imbalance(net, &f))
            .all(|(v, x)| v.p.contains(&x))
}

fn require_feasible(net: &Network, f: &Flow) -> Result<FeasibilityReport, PolytopeError> {
    let report = check_feasible(net, f)?;
    match &report.violation {
        Some(v) => Err(PolytopeError::Infeasible(v.describe(net))),
        None => Ok(report),
    }
}

/// Constraints holding with equality. A fixed element is listed on both
/// sides.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActiveSet {
    pub edges_at_lower: BTreeSet<usize>,
    pub edges_at_upper: BTreeSet<usize>,
    pub vertices_at_lower: BTreeSet<usize>,
    pub vertices_at_upper: BTreeSet<usize>,
}

impl ActiveSet {
    pub fn edges(&self) -> BTreeSet<usize> {
        self.edges_at_lower.union(&self.edges_at_upper).copied().collect()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.vertices_at_lower
            .union(&self.vertices_at_upper)
            .copied()
            .collect()
    }

    /// Distinct active elements, edges first.
    pub fn elements(&self) -> Vec<Element> {
        self.edges()
            .into_iter()
            .map(Element::Edge)
            .chain(self.vertices().into_iter().map(Element::Vertex))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.edges_at_lower.is_empty()
            && self.edges_at_upper.is_empty()
            && self.vertices_at_lower.is_empty()
            && self.vertices_at_upper.is_empty()
    }

    pub fn contains(&self, el: Element) -> bool {
        match el {
            Element::Edge(e) => self.edges_at_lower.contains(&e) || self.edges_at_upper.contains(&e),
            Element::Vertex(v) => {
                self.vertices_at_lower.contains(&v) || self.vertices_at_upper.contains(&v)
            }
        }
    }
}

fn collect_active(net: &Network, f: &Flow, injection: &[Rational]) -> ActiveSet {
    let mut a = ActiveSet::default();
    for (e, edge) in net.edges().iter().enumerate() {
        if edge.f.at_lower(&f.0[e]) {
            a.edges_at_lower.insert(e);
        }
        if edge.f.at_upper(&f.0[e]) {
            a.edges_at_upper.insert(e);
        }
    }
    for (v, vx) in net.vertices().iter().enumerate() {
        if vx.p.at_lower(&injection[v]) {
            a.vertices_at_lower.insert(v);
        }
        if vx.p.at_upper(&injection[v]) {
            a.vertices_at_upper.insert(v);
        }
    }
    a
}

pub fn active_set(net: &Network, f: &Flow) -> Result<ActiveSet, PolytopeError> {
    let report = require_feasible(net, f)?;
    Ok(collect_active(net, f, &report.injection))
}

/// Stacked rows of the given elements.
pub fn element_matrix(net: &Network, elements: &[Element]) -> RationalMatrix {
    RationalMatrix::from_rows(
        net.vertex_count(),
        elements.iter().map(|el| el.row(net)).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Extremal,
    NotExtremal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalityCertificate {
    pub verdict: Verdict,
    pub active: ActiveSet,
    pub rank_active: usize,
    /// A non-constant potential whose flow keeps every active constraint
    /// tight; present iff not extremal.
    pub direction: Option<Potential>,
    /// Step with `f +- epsilon B^T direction` feasible.
    pub epsilon: Option<Rational>,
}

impl ExtremalityCertificate {
    pub fn is_extremal(&self) -> bool {
        self.verdict == Verdict::Extremal
    }

    /// Re-checks the certificate against `net` and `f` from scratch.
    pub fn verify(&self, net: &Network, f: &Flow) -> Result<(), String> {
        let report = check_feasible(net, f).map_err(|e| e.to_string())?;
        if let Some(v) = report.violation {
            return Err(v.describe(net));
        }
        let active = collect_active(net, f, &report.injection);
        if active != self.active {
            return Err("active set does not match the flow".into());
        }
        let rank = element_matrix(net, &active.elements()).rank();
        if rank != self.rank_active {
            return Err(format!("active rank is {rank}, certificate says {}", self.rank_active));
        }
        let full = net.vertex_count() - 1;
        match self.verdict {
            Verdict::Extremal => {
                if rank != full {
                    return Err(format!("extremal verdict with rank {rank} < {full}"));
                }
                if self.direction.is_some() || self.epsilon.is_some() {
                    return Err("extremal certificate carries a direction".into());
                }
            }
            Verdict::NotExtremal => {
                let (Some(dir), Some(eps)) = (&self.direction, &self.epsilon) else {
                    return Err("missing direction or epsilon".into());
                };
                if dir.0.len() != net.vertex_count() || dir.is_constant() {
                    return Err("direction must be a non-constant potential".into());
                }
                if !eps.is_positive() {
                    return Err("epsilon must be positive".into());
                }
                for el in active.elements() {
                    if !crate::matrix::dot(&el.row(net), &dir.0).is_zero() {
                        return Err(format!("direction moves active constraint {:?}", el.id(net)));
                    }
                }
                let g = dir.flow(net);
                for sign in [int(1), int(-1)] {
                    let scaled = &sign * eps;
                    let moved = Flow(f.0.iter().zip(&g.0).map(|(x, d)| x + &scaled * d).collect());
                    if let Some(v) = check_feasible(net, &moved).map_err(|e| e.to_string())?.violation {
                        return Err(format!("perturbed flow infeasible: {}", v.describe(net)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Primitive integer multiple whose first nonzero entry is positive.
pub fn normalize_direction(v: &[Rational]) -> Vec<Rational> {
    let mut l = BigInt::one();
    for q in v {
        l = l.lcm(q.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if lead_negative {
        g = -g;
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

fn gauged_kernel(net: &Network, elements: &[Element]) -> Vec<Vec<Rational>> {
    let n = net.vertex_count();
    let mut rows: Vec<Vec<Rational>> = elements.iter().map(|el| el.row(net)).collect();
    let mut gauge = vec![Rational::zero(); n];
    gauge[0] = Rational::one();
    rows.push(gauge);
    RationalMatrix::from_rows(n, rows).kernel_basis()
}

/// Half the smallest slack of an inactive finite constraint along `+-g`,
/// or 1 when nothing limits the step.
fn step_size(net: &Network, f: &Flow, injection: &[Rational], g: &Flow) -> Rational {
    let dq = imbalance(net, g);
    let mut best: Option<Rational> = None;
    let mut consider = |t: Option<Rational>| {
        if let Some(t) = t {
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
    };
    for (e, edge) in net.edges().iter().enumerate() {
        consider(edge.f.two_sided_slack(&f.0[e], &g.0[e]));
    }
    for (v, vx) in net.vertices().iter().enumerate() {
        consider(vx.p.two_sided_slack(&injection[v], &dq[v]));
    }
    match best {
        Some(t) => t / int(2),
        None => int(1),
    }
}

/// Extremal iff the active rows have rank `|V| - 1`.
pub fn is_extremal(net: &Network, f: &Flow) -> Result<ExtremalityCertificate, PolytopeError> {
    let report = require_feasible(net, f)?;
    let active = collect_active(net, f, &report.injection);
    let elements = active.elements();
    let rank_active = element_matrix(net, &elements).rank();
    if rank_active == net.vertex_count() - 1 {
        return Ok(ExtremalityCertificate {
            verdict: Verdict::Extremal,
            active,
            rank_active,
            direction: None,
            epsilon: None,
        });
    }
    let kernel = gauged_kernel(net, &elements);
    let dir = Potential(normalize_direction(&kernel[0]));
    let g = dir.flow(net);
    let epsilon = step_size(net, f, &report.injection, &g);
    Ok(ExtremalityCertificate {
        verdict: Verdict::NotExtremal,
        active,
        rank_active,
        direction: Some(dir),
        epsilon: Some(epsilon),
    })
}

pub const DEFAULT_VERTEX_CAP: usize = 10;

/// All extreme points of the polytope, sorted lexicographically.
///
/// Every set of `|V| - 1` independent constraint rows is tried with every
/// choice of finite sides; the resulting potentials are kept when feasible.
pub fn enumerate_vertices(net: &Network, cap: usize) -> Result<Vec<Flow>, PolytopeError> {
    let n = net.vertex_count();
    if n > cap {
        return Err(PolytopeError::CapExceeded { what: "vertex count", cap });
    }
    let candidates: Vec<(Element, Vec<Rational>, Vec<Rational>)> = Element::all(net)
        .into_iter()
        .filter_map(|el| {
            let values: Vec<Rational> = el
                .interval(net)
                .finite_sides()
                .into_iter()
                .map(|(_, x)| x.clone())
                .collect();
            (!values.is_empty()).then(|| (el, el.row(net), values))
        })
        .collect();
    let mut found = BTreeSet::new();
    let mut chosen = Vec::with_capacity(n - 1);
    let space = RowSpace::new(n);
    bases(&candidates, 0, space, &mut chosen, n - 1, &mut |basis| {
        for phi in basis_potentials(n, &candidates, basis) {
            if potential_feasible(net, &phi) {
                found.insert(phi.flow(net));
            }
        }
    });
    Ok(found.into_iter().collect())
}

/// Depth-first search over index sets of `target` independent rows.
fn bases(
    candidates: &[(Element, Vec<Rational>, Vec<Rational>)],
    start: usize,
    space: RowSpace,
    chosen: &mut Vec<usize>,
    target: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == target {
        visit(chosen);
        return;
    }
    let remaining = target - chosen.len();
    for i in start..candidates.len() {
        if candidates.len() - i < remaining {
            break;
        }
        let mut next = space.clone();
        if !next.try_insert(&candidates[i].1) {
            continue;
        }
        chosen.push(i);
        bases(candidates, i + 1, next, chosen, target, visit);
        chosen.pop();
    }
}

/// The potentials pinned by a basis under every choice of finite sides.
fn basis_potentials(
    n: usize,
    candidates: &[(Element, Vec<Rational>, Vec<Rational>)],
    basis: &[usize],
) -> Vec<Potential> {
    let mut rows: Vec<Vec<Rational>> = basis.iter().map(|&i| candidates[i].1.clone()).collect();
    let mut gauge = vec![Rational::zero(); n];
    gauge[0] = Rational::one();
    rows.push(gauge);
    let inv = RationalMatrix::from_rows(n, rows)
        .inverse()
        .expect("independent rows plus the gauge are invertible");
    let mut out = vec![vec![Rational::zero(); n]];
    for (k, &i) in basis.iter().enumerate() {
        let col = inv.column(k);
        let mut next = Vec::with_capacity(out.len() * candidates[i].2.len());
        for base in &out {
            for value in &candidates[i].2 {
                let mut phi = base.clone();
                if !value.is_zero() {
                    for (p, c) in phi.iter_mut().zip(&col) {
                        if !c.is_zero() {
                            *p += value * c;
                        }
                    }
                }
                next.push(phi);
            }
        }
        out = next;
    }
    out.into_iter().map(Potential).collect()
}

/// Groups elements by which side they sit on for `f`, for documents. A
/// fixed element reports `Lower`.
pub fn element_sides(net: &Network, f: &Flow) -> BTreeMap<Element, Side> {
    let injection = imbalance(net, f);
    let mut out = BTreeMap::new();
    for el in Element::all(net) {
        let value = match el {
            Element::Edge(e) => &f.0[e],
            Element::Vertex(v) => &injection[v],
        };
        let iv = el.interval(net);
        if iv.at_lower(value) {
            out.insert(el, Side::Lower);
        } else if iv.at_upper(value) {
            out.insert(el, Side::Upper);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkBuilder;
    use crate::rational::ratio;

    fn k2(f: Interval) -> Network {
        let mut nb = NetworkBuilder::new();
        nb.add_vertex("v", Interval::free())
            .add_vertex("w", Interval::free())
            .add_edge("e", "v", "w", int(2), f);
        nb.build().unwrap()
    }

    fn triangle(f: Interval) -> Network {
        let mut nb = NetworkBuilder::new();
        for v in ["a", "b", "c"] {
            nb.add_vertex(v, Interval::free());
        }
        nb.add_edge("ab", "a", "b", int(1), f.clone())
            .add_edge("bc", "b", "c", int(1), f.clone())
            .add_edge("ac", "a", "c", int(1), f);
        nb.build().unwrap()
    }

    #[test]
    fn imbalance_and_potential() {
        let net = k2(Interval::free());
        assert_eq!(imbalance(&net, &Flow(vec![int(3)])), vec![int(3), int(-3)]);
        assert_eq!(
            recover_potential(&net, &Flow(vec![int(4)])),
            Some(Potential(vec![int(0), int(2)]))
        );
        let tri = triangle(Interval::free());
        assert_eq!(recover_potential(&tri, &Flow(vec![int(1), int(1), int(-1)])), None);
        let circ = Flow(vec![int(1), int(1), int(-1)]);
        assert!(imbalance(&tri, &circ).iter().all(Zero::is_zero));
    }

    #[test]
    fn feasibility_reports_first_violation() {
        let net = k2(Interval::closed(int(-1), int(1)));
        assert!(is_feasible(&net, &Flow(vec![int(0)])));
        let r = check_feasible(&net, &Flow(vec![int(2)])).unwrap();
        assert_eq!(
            r.violation,
            Some(Violation::EdgeBound { edge: 0, side: Side::Upper, value: int(2) })
        );
        assert!(check_feasible(&net, &Flow(vec![])).is_err());
    }

    #[test]
    fn k2_at_bound_is_extremal() {
        let net = k2(Interval::closed(int(-1), int(1)));
        let f = Flow(vec![int(1)]);
        let cert = is_extremal(&net, &f).unwrap();
        assert!(cert.is_extremal());
        assert_eq!(cert.rank_active, 1);
        assert!(cert.active.edges_at_upper.contains(&0));
        cert.verify(&net, &f).unwrap();

        let inner = Flow(vec![ratio(1, 2)]);
        let cert = is_extremal(&net, &inner).unwrap();
        assert!(!cert.is_extremal());
        assert_eq!(cert.epsilon, Some(ratio(1, 8)));
        cert.verify(&net, &inner).unwrap();
    }

    #[test]
    fn enumerate_k2_and_triangle() {
        let net = k2(Interval::closed(int(-1), int(1)));
        assert_eq!(
            enumerate_vertices(&net, DEFAULT_VERTEX_CAP).unwrap(),
            vec![Flow(vec![int(-1)]), Flow(vec![int(1)])]
        );
        let tri = triangle(Interval::closed(int(-1), int(1)));
        let verts = enumerate_vertices(&tri, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(verts.len(), 6);
        for f in &verts {
            assert!(is_extremal(&tri, f).unwrap().is_extremal());
        }
    }

    #[test]
    fn normalization_is_primitive() {
        assert_eq!(
            normalize_direction(&[int(0), ratio(-1, 2), ratio(3, 2)]),
            vec![int(0), int(1), int(-3)]
        );
    }
}
