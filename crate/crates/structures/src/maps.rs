//! Classification of vertex maps between structures.

use std::collections::{BTreeMap, BTreeSet};

use crate::index::Index;
use crate::irreducible::maximal_irreducible_sets;
use crate::language::SymbolKind;
use crate::structure::{SymRef, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapKind {
    Homomorphism,
    Monomorphism,
    HomomorphismEmbedding,
    Embedding,
    UClosedEmbedding,
    Isomorphism,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::Homomorphism => "homomorphism",
            MapKind::Monomorphism => "monomorphism",
            MapKind::HomomorphismEmbedding => "homomorphism-embedding",
            MapKind::Embedding => "embedding",
            MapKind::UClosedEmbedding => "u-closed-embedding",
            MapKind::Isomorphism => "isomorphism",
        }
    }

    pub fn parse(s: &str) -> Option<MapKind> {
        [
            MapKind::Homomorphism,
            MapKind::Monomorphism,
            MapKind::HomomorphismEmbedding,
            MapKind::Embedding,
            MapKind::UClosedEmbedding,
            MapKind::Isomorphism,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Every property of a map, evaluated independently.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapProfile {
    pub homomorphism: bool,
    pub injective: bool,
    pub surjective: bool,
    pub homomorphism_embedding: bool,
    pub embedding: bool,
    /// Image closed under the supplied symbols; `false` when none were supplied.
    pub u_closed: bool,
}

impl MapProfile {
    /// Strongest kind, by the fixed priority isomorphism, U-closed embedding,
    /// embedding, homomorphism-embedding, monomorphism, homomorphism.
    pub fn kind(&self, u_given: bool) -> Option<MapKind> {
        if !self.homomorphism {
            None
        } else if self.embedding && self.surjective {
            Some(MapKind::Isomorphism)
        } else if self.embedding && u_given && self.u_closed {
            Some(MapKind::UClosedEmbedding)
        } else if self.embedding {
            Some(MapKind::Embedding)
        } else if self.homomorphism_embedding {
            Some(MapKind::HomomorphismEmbedding)
        } else if self.injective {
            Some(MapKind::Monomorphism)
        } else {
            Some(MapKind::Homomorphism)
        }
    }
}

fn preimages(f: &[usize], target_size: usize) -> Vec<Vec<usize>> {
    let mut pre = vec![Vec::new(); target_size];
    for (v, &w) in f.iter().enumerate() {
        pre[w].push(v);
    }
    pre
}

/// Cartesian product of per-position choices.
fn product(choices: &[&Vec<usize>], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let k = choices.len();
    if choices.iter().any(|c| c.is_empty()) {
        return true;
    }
    let mut pos = vec![0usize; k];
    let mut cur: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        if !visit(&cur) {
            return false;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            pos[i] += 1;
            if pos[i] < choices[i].len() {
                cur[i] = choices[i][pos[i]];
                break;
            }
            pos[i] = 0;
            cur[i] = choices[i][0];
        }
    }
}

pub fn is_homomorphism(f: &[usize], a: &Structure, b: &Structure) -> bool {
    if f.len() != a.size() || f.iter().any(|&w| w >= b.size()) || a.language() != b.language() {
        return false;
    }
    let lang = a.language();
    for r in 0..lang.rel_count() {
        for t in a.tuples(r) {
            let img: Vec<usize> = t.iter().map(|&v| f[v]).collect();
            if !b.has_tuple(r, &img) {
                return false;
            }
        }
    }
    if lang.fun_count() == 0 {
        return true;
    }
    let pre = preimages(f, b.size());
    for fi in 0..lang.fun_count() {
        for (args, vals) in a.entries(fi) {
            let img: Vec<usize> = args.iter().map(|&v| f[v]).collect();
            let mapped: BTreeSet<usize> = vals.iter().map(|&v| f[v]).collect();
            if &mapped != b.value(fi, &img) {
                return false;
            }
        }
        // Entries of `b` over the image need a non-empty counterpart at every preimage.
        for (bargs, bvals) in b.entries(fi) {
            if bvals.is_empty() {
                continue;
            }
            let choices: Vec<&Vec<usize>> = bargs.iter().map(|&w| &pre[w]).collect();
            let ok = product(&choices, |x| !a.value(fi, x).is_empty());
            if !ok {
                return false;
            }
        }
    }
    true
}

fn injective(f: &[usize], target_size: usize) -> bool {
    let mut seen = vec![false; target_size];
    f.iter().all(|&w| !std::mem::replace(&mut seen[w], true))
}

/// Relation tuples of `b` over the image of `set` must come from `a`.
fn reflects_on(f: &[usize], a: &Structure, set: &[usize], bidx: &Index) -> bool {
    let mut back: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in set {
        if back.insert(f[v], v).is_some() {
            return false;
        }
    }
    for &v in set {
        for &(r, i) in &bidx.incident[f[v]] {
            let t = &bidx.tuples[r][i];
            if let Some(pre) = t.iter().map(|w| back.get(w).copied()).collect::<Option<Vec<usize>>>() {
                if !a.has_tuple(r, &pre) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_embedding(f: &[usize], a: &Structure, b: &Structure) -> bool {
    if !is_homomorphism(f, a, b) || !injective(f, b.size()) {
        return false;
    }
    let all: Vec<usize> = (0..a.size()).collect();
    reflects_on(f, a, &all, &Index::new(b))
}

pub fn is_homomorphism_embedding(f: &[usize], a: &Structure, b: &Structure) -> bool {
    if !is_homomorphism(f, a, b) {
        return false;
    }
    let bidx = Index::new(b);
    maximal_irreducible_sets(a).iter().all(|k| reflects_on(f, a, k, &bidx))
}

/// Image of `f` is closed under the given symbols: for a relation `R` of arity
/// n+1, any tuple of `b` whose first n entries lie in the image has its last
/// entry there too; for a function, values at image arguments stay in the image.
pub fn is_u_closed_image(image: &BTreeSet<usize>, b: &Structure, u: &[SymRef]) -> bool {
    u.iter().all(|s| match s.kind {
        SymbolKind::Relation => b.tuples(s.index).iter().all(|t| {
            let (last, init) = t.split_last().expect("positive arity");
            !init.iter().all(|v| image.contains(v)) || image.contains(last)
        }),
        SymbolKind::Function => b
            .entries(s.index)
            .iter()
            .all(|(args, vals)| !args.iter().all(|v| image.contains(v)) || vals.iter().all(|v| image.contains(v))),
    })
}

/// Evaluates all properties; `None` when `f` is not a total map into `b`.
pub fn profile_map(f: &[usize], a: &Structure, b: &Structure, u: Option<&[SymRef]>) -> Option<MapProfile> {
    if f.len() != a.size() || f.iter().any(|&w| w >= b.size()) || a.language() != b.language() {
        return None;
    }
    let homomorphism = is_homomorphism(f, a, b);
    let inj = injective(f, b.size());
    let image: BTreeSet<usize> = f.iter().copied().collect();
    let surjective = image.len() == b.size();
    let embedding = homomorphism && inj && {
        let all: Vec<usize> = (0..a.size()).collect();
        reflects_on(f, a, &all, &Index::new(b))
    };
    let homomorphism_embedding = embedding || (homomorphism && is_homomorphism_embedding(f, a, b));
    let u_closed = u.is_some_and(|u| is_u_closed_image(&image, b, u));
    Some(MapProfile { homomorphism, injective: inj, surjective, homomorphism_embedding, embedding, u_closed })
}

/// Strongest applicable kind of `f: a → b`, or `None` for a non-homomorphism.
pub fn classify_map(f: &[usize], a: &Structure, b: &Structure, u: Option<&[SymRef]>) -> Option<MapKind> {
    profile_map(f, a, b, u)?.kind(u.is_some())
}

/// An injective map certified at some strength.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EmbeddingMap {
    pub map: Vec<usize>,
    pub kind: MapKind,
}

impl EmbeddingMap {
    pub fn certify(f: Vec<usize>, a: &Structure, b: &Structure, u: Option<&[SymRef]>) -> Option<EmbeddingMap> {
        let kind = classify_map(&f, a, b, u)?;
        Some(EmbeddingMap { map: f, kind })
    }

    /// Re-checks the stored kind.
    pub fn verify(&self, a: &Structure, b: &Structure, u: Option<&[SymRef]>) -> bool {
        let Some(p) = profile_map(&self.map, a, b, u) else { return false };
        match self.kind {
            MapKind::Homomorphism => p.homomorphism,
            MapKind::Monomorphism => p.homomorphism && p.injective,
            MapKind::HomomorphismEmbedding => p.homomorphism_embedding,
            MapKind::Embedding => p.embedding,
            MapKind::UClosedEmbedding => p.embedding && p.u_closed,
            MapKind::Isomorphism => p.embedding && p.surjective,
        }
    }
}

pub fn compose(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&v| g[v]).collect()
}
