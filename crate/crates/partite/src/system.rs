use std::collections::{BTreeMap, BTreeSet};

use structures::language::SymbolKind;
use structures::maps::is_homomorphism_embedding;
use structures::{Language, Structure, SymRef};

/// An L-structure whose vertices are split into predicates `0..predicates`
/// by `projection`. For a D-partite system predicate `p` is vertex `p` of D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteSystem {
    pub structure: Structure,
    pub projection: Vec<usize>,
    pub predicates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartiteIssue {
    ProjectionLength { expected: usize, found: usize },
    PredicateOutOfRange { vertex: usize, predicate: usize },
    /// A relation tuple meets some partition in two distinct vertices.
    NotTransversal { symbol: String, tuple: Vec<usize> },
    /// The projection is not a homomorphism-embedding into the target.
    ProjectionNotHomomorphismEmbedding,
    /// Values of a U symbol at fixed arguments meet a partition twice.
    NotUTransversal { symbol: String, args: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteReport {
    pub issues: Vec<PartiteIssue>,
    /// Exactly one vertex in every predicate.
    pub transversal: bool,
}

impl PartiteReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl PartiteSystem {
    pub fn new(structure: Structure, projection: Vec<usize>, predicates: usize) -> Self {
        PartiteSystem { structure, projection, predicates }
    }

    /// Transversal system on `a` itself: vertex `v` sits in predicate `v`.
    pub fn transversal(a: &Structure) -> Self {
        PartiteSystem { structure: a.clone(), projection: (0..a.size()).collect(), predicates: a.size() }
    }

    pub fn size(&self) -> usize {
        self.structure.size()
    }

    /// Vertices of each partition, in increasing order.
    pub fn partitions(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.predicates];
        for (v, &p) in self.projection.iter().enumerate() {
            parts[p].push(v);
        }
        parts
    }

    /// Subsystem induced on the vertices whose projection lies in `preds`;
    /// also returns the old id of each new vertex.
    pub fn restrict(&self, preds: &BTreeSet<usize>) -> (PartiteSystem, Vec<usize>) {
        let keep: BTreeSet<usize> = (0..self.size()).filter(|&v| preds.contains(&self.projection[v])).collect();
        let (s, old) = self.structure.induced(&keep).expect("partition unions of a partite system are closed");
        let projection = old.iter().map(|&v| self.projection[v]).collect();
        (PartiteSystem { structure: s, projection, predicates: self.predicates }, old)
    }

    /// The structure over L extended by one unary relation per predicate.
    pub fn to_lp_structure(&self) -> Structure {
        let lang = lp_language(self.structure.language(), self.predicates);
        let mut s = self.structure.expand(&lang).expect("extension of the base language");
        let base = self.structure.language().rel_count();
        for (v, &p) in self.projection.iter().enumerate() {
            s.add_tuple(base + p, vec![v]).expect("in range");
        }
        s
    }

    /// Inverse of `to_lp_structure` for structures in which every vertex has one predicate.
    pub fn from_lp_structure(s: &Structure, base: &Language, predicates: usize) -> Option<PartiteSystem> {
        let first = base.rel_count();
        let mut projection = vec![usize::MAX; s.size()];
        for p in 0..predicates {
            for t in s.tuples(first + p) {
                if projection[t[0]] != usize::MAX {
                    return None;
                }
                projection[t[0]] = p;
            }
        }
        if projection.contains(&usize::MAX) {
            return None;
        }
        let structure = s.reduct(base).ok()?;
        Some(PartiteSystem { structure, projection, predicates })
    }
}

pub fn predicate_name(p: usize) -> String {
    format!("@{p}")
}

/// `base` followed by unary relations `@0 .. @{k-1}`.
pub fn lp_language(base: &Language, predicates: usize) -> Language {
    let mut rels: Vec<(String, usize)> =
        (0..base.rel_count()).map(|r| (base.rel(r).name.clone(), base.rel(r).arity)).collect();
    rels.extend((0..predicates).map(|p| (predicate_name(p), 1)));
    let funs: Vec<(String, usize)> = (0..base.fun_count()).map(|f| (base.fun(f).name.clone(), base.fun(f).arity)).collect();
    let rr: Vec<(&str, usize)> = rels.iter().map(|(n, a)| (n.as_str(), *a)).collect();
    let ff: Vec<(&str, usize)> = funs.iter().map(|(n, a)| (n.as_str(), *a)).collect();
    Language::build(&rr, &ff).expect("predicate names are fresh")
}

/// Checks partition membership, transversality of relation tuples, the
/// projection into `over` when given, and U-transversality when `u` is given.
pub fn validate_partite(b: &PartiteSystem, over: Option<&Structure>, u: Option<&[SymRef]>) -> PartiteReport {
    let mut issues = Vec::new();
    let s = &b.structure;
    if b.projection.len() != s.size() {
        issues.push(PartiteIssue::ProjectionLength { expected: s.size(), found: b.projection.len() });
        return PartiteReport { issues, transversal: false };
    }
    for (v, &p) in b.projection.iter().enumerate() {
        if p >= b.predicates {
            issues.push(PartiteIssue::PredicateOutOfRange { vertex: v, predicate: p });
        }
    }
    if !issues.is_empty() {
        return PartiteReport { issues, transversal: false };
    }
    let lang = s.language();
    for r in 0..lang.rel_count() {
        for t in s.tuples(r) {
            let distinct: BTreeSet<usize> = t.iter().copied().collect();
            let parts: BTreeSet<usize> = distinct.iter().map(|&v| b.projection[v]).collect();
            if parts.len() != distinct.len() {
                issues.push(PartiteIssue::NotTransversal { symbol: lang.rel(r).name.clone(), tuple: t.clone() });
            }
        }
    }
    if let Some(d) = over {
        if b.predicates != d.size() || !is_homomorphism_embedding(&b.projection, s, d) {
            issues.push(PartiteIssue::ProjectionNotHomomorphismEmbedding);
        }
    }
    if let Some(u) = u {
        for sym in u {
            match sym.kind {
                SymbolKind::Relation => {
                    let mut groups: BTreeMap<&[usize], BTreeSet<usize>> = BTreeMap::new();
                    for t in s.tuples(sym.index) {
                        let (last, init) = t.split_last().expect("positive arity");
                        groups.entry(init).or_default().insert(*last);
                    }
                    for (args, vals) in groups {
                        if !transversal_set(&vals, &b.projection) {
                            let symbol = lang.rel(sym.index).name.clone();
                            issues.push(PartiteIssue::NotUTransversal { symbol, args: args.to_vec() });
                        }
                    }
                }
                SymbolKind::Function => {
                    for (args, vals) in s.entries(sym.index) {
                        if !transversal_set(vals, &b.projection) {
                            let symbol = lang.fun(sym.index).name.clone();
                            issues.push(PartiteIssue::NotUTransversal { symbol, args: args.clone() });
                        }
                    }
                }
            }
        }
    }
    let transversal = b.predicates == s.size() && {
        let mut seen = vec![false; b.predicates];
        b.projection.iter().all(|&p| !std::mem::replace(&mut seen[p], true))
    };
    PartiteReport { issues, transversal }
}

fn transversal_set(vals: &BTreeSet<usize>, projection: &[usize]) -> bool {
    vals.iter().map(|&v| projection[v]).collect::<BTreeSet<_>>().len() == vals.len()
}

/// Whether the binary relation `rel` has no directed cycle (loops count).
pub fn is_acyclic(s: &Structure, rel: usize) -> bool {
    let n = s.size();
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for t in s.tuples(rel) {
        if t[0] == t[1] {
            return false;
        }
        out[t[0]].push(t[1]);
        indeg[t[1]] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}
