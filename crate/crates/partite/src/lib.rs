//! Partite systems and the partite constructions built from them: powers,
//! the partite lemmas, picture steps, iterated constructions, sparsening and
//! the recursive closed construction.

pub mod construction;
pub mod lemma;
pub mod picture;
pub mod power;
pub mod recursive;
pub mod sparsen;
pub mod system;

use structures::SearchError;
use thiserror::Error;

pub use construction::{
    induced_construction, linear_extension, linearize, non_induced_construction, poset_invariant, ConstructionOptions,
    ConstructionTrace, ExponentPolicy,
};
pub use lemma::{alphabet, certify_ramsey, induced_partite_lemma, partite_lemma, Mode, PartiteLemmaOutput, PartiteWitnesses};
pub use picture::{non_induced_picture, picture_lemma, ExtensionPolicy, PictureOptions, PictureStep, StepRecord};
pub use power::{power, PowerLayout};
pub use recursive::{recursive_closed_construction, ClosedConstruction, ClosedOptions, ClosedStep, TargetSource};
pub use sparsen::{
    is_locally_treelike, sparsen, ExtensionCert, SparsenResult, TreeWitness, TreelikeError, TreelikeReport,
    TreelikeVerdict,
};
pub use system::{is_acyclic, lp_language, validate_partite, PartiteIssue, PartiteReport, PartiteSystem};

/// Resource limits; exceeding one is an error, never a truncated result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_tuples: usize,
    pub max_steps: usize,
    /// Node budget for each embedding search.
    pub max_nodes: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: 100_000, max_tuples: 10_000_000, max_steps: 10_000, max_nodes: 10_000_000 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartiteError {
    #[error("no embedding of A is available as a letter")]
    EmptyAlphabet,
    #[error("B does not embed into the target")]
    NoEmbeddings,
    #[error("{what} would exceed the cap of {limit}")]
    SizeCapExceeded { what: &'static str, limit: u64 },
    #[error("more than {0} steps")]
    StepCapExceeded(usize),
    #[error("function symbols are not supported here")]
    FunctionsUnsupported,
    #[error("structures are over different languages")]
    LanguageMismatch,
    #[error("structure is not ordered")]
    NotOrdered,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Search(#[from] SearchError),
}
