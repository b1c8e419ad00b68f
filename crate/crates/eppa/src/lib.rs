//! Extension of partial automorphisms: witness checking, coherence,
//! faithfulness, and the product construction for n-partite tournaments.

mod check;
mod search;
mod tournament;

use thiserror::Error;

pub use check::{
    amalgamate_via_eppa, check_coherence, extend_partial, is_eppa_witness, is_irreducible_faithful, replay_table,
    Coherence, EppaAmalgam, EppaInstance, EppaVerdict, ExtensionTable,
};
pub use tournament::{is_npartite_tournament, npartite_tournament_witness, tournament, TournamentWitness};

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EppaError {
    #[error("inclusion is not an embedding")]
    InclusionNotEmbedding,
    #[error("extension table has no entry for the partial automorphism {0:?} -> {1:?}")]
    IncompleteTable(Vec<usize>, Vec<usize>),
    #[error("not an n-partite tournament: {0}")]
    NotNPartiteTournament(String),
    #[error("no automorphism of the witness moves the first copy onto the second")]
    NoExtension,
    #[error(transparent)]
    Search(#[from] structures::SearchError),
}
