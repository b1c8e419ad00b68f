//! Amalgamation of structures and finite-catalog class checks.

mod catalog;
mod tree;

use std::collections::BTreeSet;

use structures::maps::is_embedding;
use structures::search::{MapSearch, SearchKind};
use structures::Structure;
use thiserror::Error;

pub use catalog::{check_class_properties, ClassReport, Counterexample, PropertyStatus};
pub use tree::{tree_amalgam, TreeAmalgam, TreeAmalgamSpec, TreeError, TreeRecipe};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmalgamError {
    #[error("alpha{0} is not an embedding")]
    NotEmbedding(usize),
    #[error("structures are over different languages")]
    LanguageMismatch,
}

/// Two embeddings of a common base `A` into `B1` and `B2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamationProblem {
    pub base: Structure,
    pub left: Structure,
    pub right: Structure,
    pub alpha1: Vec<usize>,
    pub alpha2: Vec<usize>,
}

impl AmalgamationProblem {
    pub fn new(
        base: Structure,
        left: Structure,
        right: Structure,
        alpha1: Vec<usize>,
        alpha2: Vec<usize>,
    ) -> Result<Self, AmalgamError> {
        if base.language() != left.language() || base.language() != right.language() {
            return Err(AmalgamError::LanguageMismatch);
        }
        if !is_embedding(&alpha1, &base, &left) {
            return Err(AmalgamError::NotEmbedding(1));
        }
        if !is_embedding(&alpha2, &base, &right) {
            return Err(AmalgamError::NotEmbedding(2));
        }
        Ok(AmalgamationProblem { base, left, right, alpha1, alpha2 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub structure: Structure,
    pub beta1: Vec<usize>,
    pub beta2: Vec<usize>,
}

/// Free amalgam: `B1` keeps its numbering, the vertices of `B2` outside
/// `alpha2[A]` follow in increasing order.
pub fn free_amalgam(p: &AmalgamationProblem) -> Amalgam {
    let n1 = p.left.size();
    let mut beta2 = vec![usize::MAX; p.right.size()];
    for (a, &w) in p.alpha2.iter().enumerate() {
        beta2[w] = p.alpha1[a];
    }
    let mut next = n1;
    for b in beta2.iter_mut() {
        if *b == usize::MAX {
            *b = next;
            next += 1;
        }
    }
    let mut c = p.left.relabel(&(0..n1).collect::<Vec<_>>(), next);
    c.absorb(&p.right, &beta2);
    Amalgam { structure: c, beta1: (0..n1).collect(), beta2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    None,
    Amalgam,
    Strong,
    Free,
}

pub fn is_amalgam(c: &Structure, p: &AmalgamationProblem, beta1: &[usize], beta2: &[usize]) -> Grade {
    if !is_embedding(beta1, &p.left, c) || !is_embedding(beta2, &p.right, c) {
        return Grade::None;
    }
    if p.alpha1.iter().zip(&p.alpha2).any(|(&x, &y)| beta1[x] != beta2[y]) {
        return Grade::None;
    }
    let i1: BTreeSet<usize> = beta1.iter().copied().collect();
    let i2: BTreeSet<usize> = beta2.iter().copied().collect();
    let base: BTreeSet<usize> = p.alpha1.iter().map(|&x| beta1[x]).collect();
    if i1.intersection(&i2).copied().collect::<BTreeSet<_>>() != base {
        return Grade::Amalgam;
    }
    let covers = i1.union(&i2).count() == c.size();
    let inside = c.blocks().all(|b| b.iter().all(|v| i1.contains(v)) || b.iter().all(|v| i2.contains(v)));
    if covers && inside {
        Grade::Free
    } else {
        Grade::Strong
    }
}

/// First witness, in family order then map order, of a member of `family`
/// mapping into `s` by a map of the given kind.
pub fn forbidden_free(s: &Structure, family: &[Structure], mode: SearchKind) -> Option<(usize, Vec<usize>)> {
    family.iter().enumerate().find_map(|(i, f)| {
        MapSearch::new(f, s, mode).first().ok().flatten().map(|m| (i, m))
    })
}
