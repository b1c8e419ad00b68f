//! Structural checks on construction outputs, shared by the commands and the tests.

use std::collections::BTreeSet;

use halesjewett::enumerate_words;
use partite::{
    is_acyclic, is_locally_treelike, validate_partite, ConstructionTrace, PartiteLemmaOutput, SparsenResult,
};
use structures::maps::{classify_map, compose, is_homomorphism_embedding};
use structures::{maximal_irreducible_sets, MapKind, Structure, SymRef};

fn is_emb(k: Option<MapKind>) -> bool {
    matches!(k, Some(MapKind::Embedding | MapKind::UClosedEmbedding | MapKind::Isomorphism))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaChecks {
    /// Every `e_w` is an embedding of A.
    pub e_embeddings: bool,
    /// Every `f_W` is an embedding of B.
    pub f_embeddings: bool,
    /// `f_W ∘ φ_l = e_{W(l)}` for every parameter word and letter.
    pub composition: bool,
    /// The projection is a homomorphism-embedding into A (induced lemma only).
    pub projection: bool,
    pub words: usize,
    pub parameter_words: usize,
}

impl LemmaChecks {
    pub fn all(&self) -> bool {
        self.e_embeddings && self.f_embeddings && self.composition && self.projection
    }
}

/// Replays every witness of a partite lemma output. `b` is the L-reduct of the input system.
pub fn lemma_checks(a: &Structure, b: &Structure, out: &PartiteLemmaOutput, induced: bool) -> LemmaChecks {
    let w = &out.witnesses;
    let c = &out.system.structure;
    let sigma = w.sigma.len();
    let words = enumerate_words(sigma, w.exponent());
    let e_embeddings = words.iter().all(|x| is_emb(classify_map(&w.e(x), a, c, None)));
    let pws = w.parameter_words();
    let mut f_embeddings = true;
    let mut composition = true;
    for pw in &pws {
        let f = w.f(pw);
        f_embeddings &= is_emb(classify_map(&f, b, c, None));
        for (l, phi) in w.sigma.iter().enumerate() {
            let word = pw.substitute(l, sigma).expect("letter in alphabet");
            composition &= compose(&f, phi) == w.e(&word);
        }
    }
    let projection = !induced || is_homomorphism_embedding(&out.system.projection, c, a);
    LemmaChecks { e_embeddings, f_embeddings, composition, projection, words: words.len(), parameter_words: pws.len() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionChecks {
    /// Every picture is a valid D-partite system.
    pub pictures_valid: bool,
    /// First irreducible set projecting outside every copy of B.
    pub unprojected: Option<(usize, Vec<usize>)>,
    /// `<` is acyclic in every picture when D is ordered.
    pub order_acyclic: bool,
}

impl ConstructionChecks {
    pub fn all(&self) -> bool {
        self.pictures_valid && self.unprojected.is_none() && self.order_acyclic
    }
}

pub fn construction_checks(t: &ConstructionTrace, d: &Structure) -> ConstructionChecks {
    let pictures_valid = t.pictures.iter().all(|p| validate_partite(p, Some(d), None).is_valid());
    let order_acyclic = match d.language().order_index() {
        Some(lt) => t.pictures.iter().all(|p| is_acyclic(&p.structure, lt)),
        None => true,
    };
    ConstructionChecks { pictures_valid, unprojected: t.unprojected_irreducible(), order_acyclic }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsenChecks {
    /// The projection to `c0` is a homomorphism-embedding.
    pub projection: bool,
    /// Substructures judged by the tree-like check, and whether all passed.
    pub treelike_checked: usize,
    pub treelike: bool,
    /// Each extension copy is an embedding of B containing its clique.
    pub extensions: bool,
    /// Every maximal irreducible set lies in some extension copy.
    pub covered: bool,
    pub unresolved: usize,
}

impl SparsenChecks {
    pub fn all(&self) -> bool {
        self.projection && self.treelike && self.extensions && self.covered && self.unresolved == 0
    }
}

pub fn sparsen_checks(a: &Structure, b: &Structure, c0: &Structure, n: usize, r: &SparsenResult) -> SparsenChecks {
    let projection = is_homomorphism_embedding(&r.projection, &r.structure, c0);
    let (treelike_checked, treelike) = match is_locally_treelike(&r.structure, a, b, n, &r.witnesses) {
        Ok(rep) => (rep.verdicts.len(), rep.all_valid()),
        Err(_) => (0, false),
    };
    let extensions = r.extensions.iter().all(|e| {
        is_emb(classify_map(&e.copy, b, &r.structure, None)) && e.clique.iter().all(|v| e.copy.contains(v))
    });
    let copies: Vec<BTreeSet<usize>> = r.extensions.iter().map(|e| e.copy.iter().copied().collect()).collect();
    let covered = maximal_irreducible_sets(&r.structure)
        .iter()
        .all(|k| copies.iter().any(|c| k.iter().all(|v| c.contains(v))));
    SparsenChecks { projection, treelike_checked, treelike, extensions, covered, unresolved: r.unresolved.len() }
}

/// Whether each copy is a U-closed embedding of `b` into `c`.
pub fn closed_copies_ok(b: &Structure, c: &Structure, copies: &[Vec<usize>], u: &[SymRef]) -> bool {
    copies.iter().all(|f| {
        let kind = classify_map(f, b, c, if u.is_empty() { None } else { Some(u) });
        if u.is_empty() {
            is_emb(kind)
        } else {
            matches!(kind, Some(MapKind::UClosedEmbedding | MapKind::Isomorphism))
        }
    })
}
