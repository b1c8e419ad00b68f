//! Partition arrows `C ⟶ (B)^A_r` decided by exact hypergraph coloring search.

pub mod coloring;
pub mod hypergraph;
pub mod tangent;
pub mod types;

use thiserror::Error;

pub use coloring::{
    check_arrow, find_coloring, ramsey_degree_in, replay_witness, rigidity_coloring, ArrowResult, ColoringWitness,
    Degree, WitnessProperty,
};
pub use hypergraph::{abc_hypergraph, AbcHypergraph};
pub use tangent::{rado_clique_degrees, tangent_numbers};
pub use types::{tree_of_types, TypeTree};

/// Default node budget for searches.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrowError {
    #[error("search exceeded the node cap of {0}")]
    SearchCapExceeded(u64),
    #[error("structures are over different languages")]
    LanguageMismatch,
    #[error("at least one color is required")]
    NoColors,
}

impl From<structures::SearchError> for ArrowError {
    fn from(e: structures::SearchError) -> Self {
        match e {
            structures::SearchError::CapExceeded(n) => ArrowError::SearchCapExceeded(n),
            structures::SearchError::LanguageMismatch => ArrowError::LanguageMismatch,
        }
    }
}
