//! Completions of partial structures into metric spaces, equivalences,
//! linear orders and ordered posets, plus the C-relation and Boolean algebra
//! correspondences and the injective homomorphism-embedding rewrite.

pub mod boolean;
pub mod crel;
pub mod equivalence;
pub mod injective;
pub mod metric;
pub mod order;

use thiserror::Error;

pub use boolean::{ba_embedding_correspondence, enumerate_rigid_surjections, ordered_boolean_algebra, BaCorrespondence};
pub use crel::{check_c_relation, CAxiom, CRelationReport};
pub use equivalence::{complete_equivalence, t_functor, t_ordered, u_functor, u_ordered, EquivalenceOutcome};
pub use injective::injectivize_homomorphism_embedding;
pub use metric::{complete_metric, label_name, non_metric_cycles, EdgeLabelledGraph, MetricOutcome, NonMetricCycle, Q};
pub use order::{complete_poset_linext, extend_linear_order, OrderWitness, LL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("missing relation `{0}`")]
    MissingSymbol(String),
    #[error("relation `{0}` must be binary")]
    WrongArity(String),
    #[error("`{0}` is not a distance label")]
    BadLabel(String),
    #[error("pair {0},{1} carries two labels")]
    ConflictingLabels(usize, usize),
    #[error("label on {0},{1} is not symmetric")]
    Asymmetric(usize, usize),
    #[error("language is not relational")]
    NotRelational,
    #[error("map is not a homomorphism-embedding")]
    NotHomomorphismEmbedding,
    #[error("order is not convex with respect to the equivalence")]
    NotConvex,
    #[error("algebras are materialized only up to 4 atoms, got {0}")]
    TooLarge(usize),
    #[error("not a member of the class: {0}")]
    NotInClass(String),
}
