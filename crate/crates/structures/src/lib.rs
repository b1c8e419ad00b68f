//! Finite relational and functional structures, maps between them, and
//! exhaustive enumeration of embeddings.

pub mod build;
pub mod index;
pub mod irreducible;
pub mod language;
pub mod maps;
pub mod search;
pub mod structure;

pub use index::Index;
pub use irreducible::{gaifman_graph, is_irreducible, lies_in_irreducible, maximal_irreducible_sets, Irreducibility};
pub use language::{Language, LanguageError, Symbol, SymbolKind, ORDER};
pub use maps::{classify_map, EmbeddingMap, MapKind, MapProfile};
pub use search::{
    automorphisms, embeddings, enumerate_embeddings, isomorphism, partial_automorphisms, Constraints, MapSearch,
    PartialAutomorphism, SearchError, SearchKind,
};
pub use structure::{
    resolve_symbols, validate_structure, Issue, Structure, StructureDraft, StructureError, SymRef, ValidationReport,
};
