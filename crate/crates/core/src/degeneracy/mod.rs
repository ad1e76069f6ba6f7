//! Non-degeneracy: cactus recognition, diamond subdivisions, explicit
//! degeneracy witnesses, sufficient extremality conditions, generalized
//! differential flows and an exhaustive search over alpha-trees.

mod cactus;
mod generalized;
mod paths;
mod search;
mod sufficient;
mod witness;

use thiserror::Error;

use crate::alpha::AlphaError;
use crate::model::ModelError;
use crate::polytope::PolytopeError;

pub use cactus::{cactus_report, is_cactus, CactusReport};
pub use generalized::{
    generalized_flow_feasible, has_spanning_anti_arborescence, AntiArborescence, GeneralizedElasticity,
};
pub use paths::{find_diamond_minor, DiamondMinor};
pub use search::{
    enumerate_alpha_forests, enumerate_alpha_trees, test_nondegeneracy, BoundMode, DegenerateCertificate,
    NondegeneracyVerdict, SearchOptions, DEFAULT_MAX_VERTICES,
};
pub use sufficient::{check_suff_one_active_per_component, check_suff_small_degree, SuffVerdict};
pub use witness::{build_degeneracy_witness, DegeneracyWitness, Part};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegeneracyError {
    #[error("graph is not connected")]
    Disconnected,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certified a flow whose active rows have rank {rank} < {expected}")]
    FalseCertification { rank: usize, expected: usize },
    #[error("search budget of {budget} candidates exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("{vertices} vertices exceeds the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("generalized elasticity at ({0}, {1}) is negative")]
    NegativeElasticity(usize, usize),
    #[error("{0}")]
    Internal(String),
}
