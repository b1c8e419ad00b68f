//! Backtracking enumeration of maps between structures.
//!
//! Source vertices are assigned in increasing order and candidates are tried in
//! increasing order, so results come out in lexicographic order.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::index::Index;
use crate::irreducible::{maximal_irreducible_sets, EXHAUSTIVE_LIMIT};
use crate::maps::{is_homomorphism, is_u_closed_image};
use crate::structure::{Structure, SymRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchKind {
    Homomorphism,
    Monomorphism,
    HomomorphismEmbedding,
    Embedding,
}

impl SearchKind {
    fn injective(self) -> bool {
        matches!(self, SearchKind::Monomorphism | SearchKind::Embedding)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search exceeded the node cap of {0}")]
    CapExceeded(u64),
    #[error("structures are over different languages")]
    LanguageMismatch,
}

/// Optional restrictions on the maps produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    /// Per source vertex, the allowed target vertices.
    pub domain: Option<Vec<Vec<usize>>>,
    /// Image must be closed under these symbols.
    pub u_closed: Option<Vec<SymRef>>,
}

impl Constraints {
    /// Source vertex `v` may only go to target vertices with the same projection.
    pub fn projection(src_proj: &[usize], tgt_proj: &[usize]) -> Constraints {
        let parts = src_proj.iter().chain(tgt_proj).copied().max().map_or(0, |m| m + 1);
        let mut by_part = vec![Vec::new(); parts];
        for (w, &p) in tgt_proj.iter().enumerate() {
            by_part[p].push(w);
        }
        Constraints { domain: Some(src_proj.iter().map(|&p| by_part[p].clone()).collect()), u_closed: None }
    }

    pub fn with_u_closed(mut self, u: Vec<SymRef>) -> Constraints {
        self.u_closed = Some(u);
        self
    }
}

pub struct MapSearch<'a> {
    a: &'a Structure,
    b: &'a Structure,
    kind: SearchKind,
    constraints: Constraints,
    node_cap: Option<u64>,
}

struct State<'s> {
    a: &'s Structure,
    b: &'s Structure,
    kind: SearchKind,
    bidx: Index,
    a_nb: Vec<Vec<usize>>,
    /// Source tuples whose largest entry is the given vertex.
    closing: Vec<Vec<(usize, Vec<usize>)>>,
    /// Maximal irreducible sets whose largest vertex is the given vertex.
    cliques: Vec<Vec<Vec<usize>>>,
    allowed: Option<Vec<Vec<bool>>>,
    domain: Option<Vec<Vec<usize>>>,
    u_closed: Option<Vec<SymRef>>,
    f: Vec<usize>,
    back: Vec<usize>,
    used: Vec<usize>,
    nodes: u64,
    cap: Option<u64>,
}

const NONE: usize = usize::MAX;

impl<'a> MapSearch<'a> {
    pub fn new(a: &'a Structure, b: &'a Structure, kind: SearchKind) -> Self {
        MapSearch { a, b, kind, constraints: Constraints::default(), node_cap: None }
    }

    pub fn constraints(mut self, c: Constraints) -> Self {
        self.constraints = c;
        self
    }

    pub fn node_cap(mut self, cap: u64) -> Self {
        self.node_cap = Some(cap);
        self
    }

    /// Calls `visit` on each map in order; stops early when it returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> bool) -> Result<(), SearchError> {
        let (a, b) = (self.a, self.b);
        if a.language() != b.language() {
            return Err(SearchError::LanguageMismatch);
        }
        let n = a.size();
        if self.kind.injective() && n > b.size() {
            return Ok(());
        }
        let aidx = Index::new(a);
        let mut closing = vec![Vec::new(); n];
        for r in 0..a.language().rel_count() {
            for t in a.tuples(r) {
                if let Some(&m) = t.iter().max() {
                    closing[m].push((r, t.clone()));
                }
            }
        }
        let mut cliques = vec![Vec::new(); n];
        if self.kind == SearchKind::HomomorphismEmbedding && (a.is_relational() || n <= EXHAUSTIVE_LIMIT) {
            for k in maximal_irreducible_sets(a) {
                if let Some(&m) = k.last() {
                    cliques[m].push(k);
                }
            }
        }
        let allowed = self.constraints.domain.as_ref().map(|d| {
            d.iter()
                .map(|ws| {
                    let mut bits = vec![false; b.size()];
                    for &w in ws {
                        if w < b.size() {
                            bits[w] = true;
                        }
                    }
                    bits
                })
                .collect()
        });
        let domain = self.constraints.domain.as_ref().map(|d| {
            d.iter()
                .map(|ws| {
                    let mut v: Vec<usize> = ws.iter().copied().filter(|&w| w < b.size()).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect()
        });
        let mut st = State {
            a,
            b,
            kind: self.kind,
            bidx: Index::new(b),
            a_nb: aidx.neighbors,
            closing,
            cliques,
            allowed,
            domain,
            u_closed: self.constraints.u_closed.clone(),
            f: vec![NONE; n],
            back: vec![NONE; b.size()],
            used: vec![0; b.size()],
            nodes: 0,
            cap: self.node_cap,
        };
        st.rec(0, &mut visit).map(|_| ())
    }

    pub fn collect(&self) -> Result<Vec<Vec<usize>>, SearchError> {
        let mut out = Vec::new();
        self.for_each(|f| {
            out.push(f.to_vec());
            true
        })?;
        Ok(out)
    }

    pub fn first(&self) -> Result<Option<Vec<usize>>, SearchError> {
        let mut out = None;
        self.for_each(|f| {
            out = Some(f.to_vec());
            false
        })?;
        Ok(out)
    }

    pub fn count(&self) -> Result<usize, SearchError> {
        let mut c = 0;
        self.for_each(|_| {
            c += 1;
            true
        })?;
        Ok(c)
    }
}

impl State<'_> {
    fn candidates(&self, i: usize) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for &j in &self.a_nb[i] {
            if j >= i {
                break;
            }
            let w = self.f[j];
            let nb = &self.bidx.neighbors[w];
            if best.as_ref().is_none_or(|b| nb.len() + 1 < b.len()) {
                let mut c = nb.clone();
                if !self.kind.injective() {
                    let pos = c.partition_point(|&x| x < w);
                    c.insert(pos, w);
                }
                best = Some(c);
            }
        }
        match (best, &self.domain) {
            (Some(c), Some(d)) if d[i].len() < c.len() => d[i].clone(),
            (Some(c), _) => c,
            (None, Some(d)) => d[i].clone(),
            (None, None) => (0..self.b.size()).collect(),
        }
    }

    fn consistent(&self, i: usize, w: usize) -> bool {
        if let Some(al) = &self.allowed {
            if !al[i][w] {
                return false;
            }
        }
        if self.kind.injective() && self.used[w] > 0 {
            return false;
        }
        for &j in &self.a_nb[i] {
            if j >= i {
                break;
            }
            let fj = self.f[j];
            if fj != w && !self.bidx.adjacent(fj, w) {
                return false;
            }
        }
        for (r, t) in &self.closing[i] {
            let img: Vec<usize> = t.iter().map(|&v| self.f[v]).collect();
            if !self.b.has_tuple(*r, &img) {
                return false;
            }
        }
        if self.kind == SearchKind::Embedding {
            // Target tuples at w with every entry already in the image must come from the source.
            for &(r, k) in &self.bidx.incident[w] {
                let t = &self.bidx.tuples[r][k];
                let pre: Option<Vec<usize>> = t
                    .iter()
                    .map(|&x| if x == w { Some(i) } else { (self.back[x] != NONE).then(|| self.back[x]) })
                    .collect();
                if let Some(pre) = pre {
                    if !self.a.has_tuple(r, &pre) {
                        return false;
                    }
                }
            }
        }
        if self.kind == SearchKind::HomomorphismEmbedding {
            for k in &self.cliques[i] {
                if !self.reflects(k) {
                    return false;
                }
            }
        }
        true
    }

    fn reflects(&self, set: &[usize]) -> bool {
        let mut img: Vec<usize> = set.iter().map(|&v| self.f[v]).collect();
        img.sort_unstable();
        if img.windows(2).any(|p| p[0] == p[1]) {
            return false;
        }
        for &v in set {
            for &(r, k) in &self.bidx.incident[self.f[v]] {
                let t = &self.bidx.tuples[r][k];
                if t.iter().all(|x| img.binary_search(x).is_ok()) {
                    let pre: Vec<usize> =
                        t.iter().map(|&x| *set.iter().find(|&&s| self.f[s] == x).expect("in image")).collect();
                    if !self.a.has_tuple(r, &pre) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn leaf_ok(&self) -> bool {
        if !self.a.is_relational() {
            if !is_homomorphism(&self.f, self.a, self.b) {
                return false;
            }
            if self.kind == SearchKind::HomomorphismEmbedding && self.a.size() > EXHAUSTIVE_LIMIT {
                return false;
            }
        }
        if let Some(u) = &self.u_closed {
            let image: BTreeSet<usize> = self.f.iter().copied().collect();
            if !is_u_closed_image(&image, self.b, u) {
                return false;
            }
        }
        true
    }

    /// Returns `Ok(false)` when the visitor asked to stop.
    fn rec(&mut self, i: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> Result<bool, SearchError> {
        if i == self.a.size() {
            if self.leaf_ok() {
                return Ok(visit(&self.f));
            }
            return Ok(true);
        }
        for w in self.candidates(i) {
            self.nodes += 1;
            if let Some(cap) = self.cap {
                if self.nodes > cap {
                    return Err(SearchError::CapExceeded(cap));
                }
            }
            self.f[i] = w;
            if !self.consistent(i, w) {
                self.f[i] = NONE;
                continue;
            }
            if self.used[w] == 0 {
                self.back[w] = i;
            }
            self.used[w] += 1;
            let go_on = self.rec(i + 1, visit)?;
            self.used[w] -= 1;
            if self.used[w] == 0 {
                self.back[w] = NONE;
            }
            self.f[i] = NONE;
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// All embeddings `a → b` in lexicographic order.
pub fn embeddings(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    MapSearch::new(a, b, SearchKind::Embedding).collect().unwrap_or_default()
}

/// Embeddings subject to constraints.
pub fn enumerate_embeddings(a: &Structure, b: &Structure, c: &Constraints) -> Vec<Vec<usize>> {
    MapSearch::new(a, b, SearchKind::Embedding).constraints(c.clone()).collect().unwrap_or_default()
}

pub fn homomorphisms(a: &Structure, b: &Structure) -> Vec<Vec<usize>> {
    MapSearch::new(a, b, SearchKind::Homomorphism).collect().unwrap_or_default()
}

pub fn automorphisms(s: &Structure) -> Vec<Vec<usize>> {
    embeddings(s, s)
}

pub fn isomorphism(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    if a.size() != b.size() || a.tuple_count() != b.tuple_count() {
        return None;
    }
    MapSearch::new(a, b, SearchKind::Embedding).first().ok().flatten()
}

/// An isomorphism between two closed substructures of one structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAutomorphism {
    /// Sorted closed domain.
    pub domain: Vec<usize>,
    /// `map[i]` is the image of `domain[i]`.
    pub map: Vec<usize>,
}

impl PartialAutomorphism {
    pub fn image_of(&self, v: usize) -> Option<usize> {
        self.domain.binary_search(&v).ok().map(|i| self.map[i])
    }

    /// Checks that this is an isomorphism between closed substructures of `s`.
    pub fn verify(&self, s: &Structure) -> bool {
        let dom: BTreeSet<usize> = self.domain.iter().copied().collect();
        let img: BTreeSet<usize> = self.map.iter().copied().collect();
        if dom.len() != self.domain.len() || img.len() != self.map.len() || self.map.len() != self.domain.len() {
            return false;
        }
        let (Ok((d, _)), Ok((i, img_old))) = (s.induced(&dom), s.induced(&img)) else { return false };
        let f: Vec<usize> = self.map.iter().map(|w| img_old.binary_search(w).expect("in image")).collect();
        crate::maps::is_embedding(&f, &d, &i) && f.len() == i.size()
    }
}

/// Partial automorphisms with closed domains of size at most `max_domain`,
/// ordered by domain size, then domain, then map.
pub fn partial_automorphisms(s: &Structure, max_domain: Option<usize>) -> Vec<PartialAutomorphism> {
    let n = s.size();
    let limit = max_domain.unwrap_or(n).min(n);
    let mut out = Vec::new();
    for size in 0..=limit {
        for dom in subsets_of_size(n, size) {
            let set: BTreeSet<usize> = dom.iter().copied().collect();
            let Ok((sub, old)) = s.induced(&set) else { continue };
            for e in embeddings(&sub, s) {
                let image: BTreeSet<usize> = e.iter().copied().collect();
                if s.is_closed(&image) {
                    out.push(PartialAutomorphism { domain: old.clone(), map: e });
                }
            }
        }
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else { return out };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
