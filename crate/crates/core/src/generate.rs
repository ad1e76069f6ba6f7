//! Seeded random networks for tests and the command line.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::degeneracy::is_cactus;
use crate::graph::SimpleGraph;
use crate::model::{ModelError, Network, NetworkBuilder};
use crate::rational::{ratio, Bound, Interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("unknown {kind} {value:?}")]
    UnknownName { kind: &'static str, value: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Tree,
    Cycle,
    Cactus,
    Random,
    NonCactus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStyle {
    Free,
    /// Edges in `[-c, c]`; about half the vertices likewise, the rest free.
    Symmetric,
    /// Finite intervals containing zero, occasionally a single point.
    RandomFinite,
    /// Each bound independently free, one-sided, closed or fixed.
    Mixed,
}

impl FromStr for Topology {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "tree" => Topology::Tree,
            "cycle" => Topology::Cycle,
            "cactus" => Topology::Cactus,
            "random" => Topology::Random,
            "non-cactus" => Topology::NonCactus,
            _ => {
                return Err(GenerateError::UnknownName {
                    kind: "topology",
                    value: s.into(),
                })
            }
        })
    }
}

impl FromStr for BoundStyle {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "free" => BoundStyle::Free,
            "symmetric" => BoundStyle::Symmetric,
            "random-finite" => BoundStyle::RandomFinite,
            "mixed" => BoundStyle::Mixed,
            _ => {
                return Err(GenerateError::UnknownName {
                    kind: "bound style",
                    value: s.into(),
                })
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub topology: Topology,
    pub bounds: BoundStyle,
    /// Largest numerator and denominator of generated rationals.
    pub magnitude: u32,
    /// Edges added beyond a spanning tree by the `Random` topology.
    pub extra_edges: usize,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            seed: 0,
            min_vertices: 2,
            max_vertices: 6,
            topology: Topology::Random,
            bounds: BoundStyle::Free,
            magnitude: 4,
            extra_edges: 2,
        }
    }
}

/// Every vertex after the first hangs off an earlier one.
pub fn random_tree(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    (1..n).map(|i| (rng.gen_range(0..i), i)).collect()
}

/// Blocks that are bridges or cycles of length three to five, each glued
/// to a random earlier vertex.
pub fn random_cactus(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut next = 1;
    while next < n {
        let anchor = rng.gen_range(0..next);
        let room = n - next;
        let block = if room >= 2 && rng.gen_bool(0.6) {
            rng.gen_range(2..=room.min(4))
        } else {
            1
        };
        let mut prev = anchor;
        for x in next..next + block {
            edges.push((prev, x));
            prev = x;
        }
        if block >= 2 {
            edges.push((prev, anchor));
        }
        next += block;
    }
    edges
}

fn undirected(edges: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
}

fn add_random_edge(n: usize, edges: &mut Vec<(usize, usize)>, rng: &mut impl Rng) -> bool {
    let present = undirected(edges);
    let missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|p| !present.contains(p))
        .collect();
    match missing.choose(rng) {
        Some(&p) => {
            edges.push(p);
            true
        }
        None => false,
    }
}

/// The undirected edge list for a topology on `n` vertices.
pub fn random_graph(
    topology: Topology,
    n: usize,
    extra_edges: usize,
    rng: &mut impl Rng,
) -> Result<Vec<(usize, usize)>, GenerateError> {
    if n == 0 {
        return Err(GenerateError::Infeasible("at least one vertex is required".into()));
    }
    Ok(match topology {
        Topology::Tree => random_tree(n, rng),
        Topology::Cycle => {
            if n < 3 {
                return Err(GenerateError::Infeasible(format!("a cycle needs 3 vertices, got {n}")));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order[1..].shuffle(rng);
            (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
        }
        Topology::Cactus => random_cactus(n, rng),
        Topology::Random => {
            let mut edges = random_tree(n, rng);
            for _ in 0..extra_edges {
                if !add_random_edge(n, &mut edges, rng) {
                    break;
                }
            }
            edges
        }
        Topology::NonCactus => {
            if n < 4 {
                return Err(GenerateError::Infeasible(format!("a diamond needs 4 vertices, got {n}")));
            }
            let mut edges = random_cactus(n, rng);
            loop {
                let g = SimpleGraph::new(n, edges.clone());
                if !is_cactus(&g).expect("generated graphs are connected").is_cactus {
                    break edges;
                }
                add_random_edge(n, &mut edges, rng);
            }
        }
    })
}

fn positive(rng: &mut impl Rng, mag: u32) -> Rational {
    ratio(rng.gen_range(1..=mag as i64), rng.gen_range(1..=mag as i64))
}

fn nonnegative(rng: &mut impl Rng, mag: u32) -> Rational {
    ratio(rng.gen_range(0..=mag as i64), rng.gen_range(1..=mag as i64))
}

fn signed(rng: &mut impl Rng, mag: u32) -> Rational {
    ratio(rng.gen_range(-(mag as i64)..=mag as i64), rng.gen_range(1..=mag as i64))
}

fn interval(style: BoundStyle, vertex: bool, rng: &mut impl Rng, mag: u32) -> Interval {
    match style {
        BoundStyle::Free => Interval::free(),
        BoundStyle::Symmetric => {
            if vertex && rng.gen_bool(0.5) {
                Interval::free()
            } else {
                Interval::symmetric(positive(rng, mag))
            }
        }
        BoundStyle::RandomFinite => {
            if rng.gen_ratio(1, 8) {
                Interval::point(Rational::from_integer(0.into()))
            } else {
                Interval::closed(-nonnegative(rng, mag), nonnegative(rng, mag))
            }
        }
        BoundStyle::Mixed => match rng.gen_range(0..5) {
            0 => Interval::free(),
            1 => Interval::at_most(signed(rng, mag)),
            2 => Interval::at_least(signed(rng, mag)),
            3 => {
                let (a, b) = (signed(rng, mag), signed(rng, mag));
                Interval::new(Bound::Finite(a.clone().min(b.clone())), Bound::Finite(a.max(b)))
            }
            _ => Interval::point(signed(rng, mag)),
        },
    }
}

/// Builds a network from an undirected edge list with random orientation,
/// elasticities and bounds.
pub fn network_from_graph(
    n: usize,
    edges: &[(usize, usize)],
    bounds: BoundStyle,
    magnitude: u32,
    rng: &mut impl Rng,
) -> Result<Network, GenerateError> {
    let mut nb = NetworkBuilder::new();
    for v in 0..n {
        nb.add_vertex(format!("v{v}"), interval(bounds, true, rng, magnitude));
    }
    for (i, &(a, b)) in edges.iter().enumerate() {
        let (tail, head) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let elasticity = positive(rng, magnitude);
        let iv = interval(bounds, false, rng, magnitude);
        nb.add_edge(format!("e{i}"), format!("v{tail}"), format!("v{head}"), elasticity, iv);
    }
    Ok(nb.build()?)
}

pub fn generate(config: &GeneratorConfig) -> Result<Network, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    generate_with(config, &mut rng)
}

/// Like [`generate`] but drawing from a caller-owned generator.
pub fn generate_with(config: &GeneratorConfig, rng: &mut impl Rng) -> Result<Network, GenerateError> {
    if config.min_vertices == 0 || config.min_vertices > config.max_vertices {
        return Err(GenerateError::Infeasible(format!(
            "vertex range {}..={} is empty or starts at zero",
            config.min_vertices, config.max_vertices
        )));
    }
    if config.magnitude == 0 {
        return Err(GenerateError::Infeasible("magnitude must be positive".into()));
    }
    let n = rng.gen_range(config.min_vertices..=config.max_vertices);
    let edges = random_graph(config.topology, n, config.extra_edges, rng)?;
    network_from_graph(n, &edges, config.bounds, config.magnitude, rng)
}
