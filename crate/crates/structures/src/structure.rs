use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::language::{Language, SymbolKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected}, got {found}")]
    Arity { symbol: String, expected: usize, found: usize },
    #[error("vertex {vertex} out of range (size {size})")]
    OutOfRange { vertex: usize, size: usize },
    #[error("vertex set not closed: `{symbol}` at {args:?} leaves the set")]
    NotClosed { symbol: String, args: Vec<usize> },
    #[error("structures are over different languages")]
    LanguageMismatch,
}

/// A finite structure on vertices `0..size`.
///
/// Relation contents are tuple sets. Function contents map argument tuples to
/// vertex sets; absent entries mean the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    lang: Language,
    size: usize,
    rels: Vec<BTreeSet<Vec<usize>>>,
    funs: Vec<BTreeMap<Vec<usize>, BTreeSet<usize>>>,
}

static EMPTY: BTreeSet<usize> = BTreeSet::new();

impl Structure {
    pub fn new(lang: Language, size: usize) -> Self {
        let rels = vec![BTreeSet::new(); lang.rel_count()];
        let funs = vec![BTreeMap::new(); lang.fun_count()];
        Structure { lang, size, rels, funs }
    }

    pub fn language(&self) -> &Language {
        &self.lang
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_relational(&self) -> bool {
        self.lang.is_relational()
    }

    fn check_vertices(&self, vs: &[usize]) -> Result<(), StructureError> {
        match vs.iter().find(|&&v| v >= self.size) {
            Some(&v) => Err(StructureError::OutOfRange { vertex: v, size: self.size }),
            None => Ok(()),
        }
    }

    /// Appends fresh vertices and returns the id of the first one.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        self.size += k;
        self.size - k
    }

    pub fn add_tuple(&mut self, rel: usize, t: Vec<usize>) -> Result<bool, StructureError> {
        let sym = self.lang.rel(rel);
        if sym.arity != t.len() {
            return Err(StructureError::Arity { symbol: sym.name.clone(), expected: sym.arity, found: t.len() });
        }
        self.check_vertices(&t)?;
        Ok(self.rels[rel].insert(t))
    }

    pub fn add_tuple_named(&mut self, name: &str, t: Vec<usize>) -> Result<bool, StructureError> {
        let r = self.lang.rel_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        self.add_tuple(r, t)
    }

    pub fn remove_tuple(&mut self, rel: usize, t: &[usize]) -> bool {
        self.rels[rel].remove(t)
    }

    /// Adds `values` to the value set of `fun` at `args`.
    pub fn add_values(&mut self, fun: usize, args: Vec<usize>, values: &[usize]) -> Result<(), StructureError> {
        let sym = self.lang.fun(fun);
        if sym.arity != args.len() {
            return Err(StructureError::Arity { symbol: sym.name.clone(), expected: sym.arity, found: args.len() });
        }
        self.check_vertices(&args)?;
        self.check_vertices(values)?;
        if values.is_empty() {
            return Ok(());
        }
        self.funs[fun].entry(args).or_default().extend(values.iter().copied());
        Ok(())
    }

    pub fn add_values_named(&mut self, name: &str, args: Vec<usize>, values: &[usize]) -> Result<(), StructureError> {
        let f = self.lang.fun_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        self.add_values(f, args, values)
    }

    pub fn tuples(&self, rel: usize) -> &BTreeSet<Vec<usize>> {
        &self.rels[rel]
    }

    pub fn tuples_named(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.lang.rel_index(name).map(|r| &self.rels[r])
    }

    pub fn has_tuple(&self, rel: usize, t: &[usize]) -> bool {
        self.rels[rel].contains(t)
    }

    pub fn entries(&self, fun: usize) -> &BTreeMap<Vec<usize>, BTreeSet<usize>> {
        &self.funs[fun]
    }

    pub fn value(&self, fun: usize, args: &[usize]) -> &BTreeSet<usize> {
        self.funs[fun].get(args).unwrap_or(&EMPTY)
    }

    pub fn tuple_count(&self) -> usize {
        self.rels.iter().map(|r| r.len()).sum::<usize>() + self.funs.iter().map(|f| f.len()).sum::<usize>()
    }

    /// Every relation tuple and every function entry (arguments followed by
    /// values), as vertex lists. Used for Gaifman adjacency and free-amalgam checks.
    pub fn blocks(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let r = self.rels.iter().flat_map(|s| s.iter().cloned());
        let f = self.funs.iter().flat_map(|m| {
            m.iter().map(|(a, v)| {
                let mut b = a.clone();
                b.extend(v.iter().copied());
                b
            })
        });
        r.chain(f)
    }

    /// True when `<` is present and is a strict linear order on all vertices.
    pub fn is_ordered(&self) -> bool {
        let Some(o) = self.lang.order_index() else { return false };
        let lt = &self.rels[o];
        let n = self.size;
        if lt.len() != n * n.saturating_sub(1) / 2 {
            return false;
        }
        let mut below = vec![0usize; n];
        for t in lt {
            if t[0] == t[1] || lt.contains(&vec![t[1], t[0]]) {
                return false;
            }
            below[t[1]] += 1;
        }
        // A tournament is transitive iff its in-degrees are 0..n-1.
        let mut seen = vec![false; n];
        for d in below {
            if d >= n || seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Smallest superset of `seed` closed under all function values.
    pub fn generated_closure(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = seed.clone();
        loop {
            let mut grew = false;
            for f in &self.funs {
                for (args, vals) in f {
                    if args.iter().all(|a| set.contains(a)) {
                        for v in vals {
                            grew |= set.insert(*v);
                        }
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    pub fn is_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.closure_violation(set).is_none()
    }

    fn closure_violation(&self, set: &BTreeSet<usize>) -> Option<(usize, Vec<usize>)> {
        for (i, f) in self.funs.iter().enumerate() {
            for (args, vals) in f {
                if args.iter().all(|a| set.contains(a)) && !vals.iter().all(|v| set.contains(v)) {
                    return Some((i, args.clone()));
                }
            }
        }
        None
    }

    /// Substructure on a closed vertex set, renumbered order-preservingly.
    /// Returns the structure and, for each new vertex, its old id.
    pub fn induced(&self, vset: &BTreeSet<usize>) -> Result<(Structure, Vec<usize>), StructureError> {
        self.check_vertices(&vset.iter().copied().collect::<Vec<_>>())?;
        if let Some((f, args)) = self.closure_violation(vset) {
            return Err(StructureError::NotClosed { symbol: self.lang.fun(f).name.clone(), args });
        }
        let old: Vec<usize> = vset.iter().copied().collect();
        let mut new_of = vec![usize::MAX; self.size];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let mut s = Structure::new(self.lang.clone(), old.len());
        for (r, ts) in self.rels.iter().enumerate() {
            for t in ts {
                if t.iter().all(|v| vset.contains(v)) {
                    s.rels[r].insert(t.iter().map(|&v| new_of[v]).collect());
                }
            }
        }
        for (fi, f) in self.funs.iter().enumerate() {
            for (args, vals) in f {
                if args.iter().all(|v| vset.contains(v)) {
                    s.funs[fi].insert(
                        args.iter().map(|&v| new_of[v]).collect(),
                        vals.iter().map(|&v| new_of[v]).collect(),
                    );
                }
            }
        }
        Ok((s, old))
    }

    /// Image of `self` under an injective renaming into a structure of size `size`.
    pub fn relabel(&self, map: &[usize], size: usize) -> Structure {
        let mut s = Structure::new(self.lang.clone(), size);
        s.absorb(self, map);
        s
    }

    /// Adds all content of `other`, translated by `map`, into `self`.
    pub fn absorb(&mut self, other: &Structure, map: &[usize]) {
        debug_assert_eq!(self.lang, other.lang);
        for (r, ts) in other.rels.iter().enumerate() {
            for t in ts {
                self.rels[r].insert(t.iter().map(|&v| map[v]).collect());
            }
        }
        for (fi, f) in other.funs.iter().enumerate() {
            for (args, vals) in f {
                if vals.is_empty() {
                    continue;
                }
                self.funs[fi]
                    .entry(args.iter().map(|&v| map[v]).collect())
                    .or_default()
                    .extend(vals.iter().map(|&v| map[v]));
            }
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure, StructureError> {
        if self.lang != other.lang {
            return Err(StructureError::LanguageMismatch);
        }
        let mut s = self.clone();
        let off = s.add_vertices(other.size);
        let map: Vec<usize> = (0..other.size).map(|v| v + off).collect();
        s.absorb(other, &map);
        Ok(s)
    }

    /// Same content over a larger language (symbols matched by name).
    pub fn expand(&self, lang: &Language) -> Result<Structure, StructureError> {
        let mut s = Structure::new(lang.clone(), self.size);
        for r in 0..self.lang.rel_count() {
            let sym = self.lang.rel(r);
            let t = lang.rel_index(&sym.name).ok_or_else(|| StructureError::UnknownSymbol(sym.name.clone()))?;
            s.rels[t] = self.rels[r].clone();
        }
        for f in 0..self.lang.fun_count() {
            let sym = self.lang.fun(f);
            let t = lang.fun_index(&sym.name).ok_or_else(|| StructureError::UnknownSymbol(sym.name.clone()))?;
            s.funs[t] = self.funs[f].clone();
        }
        Ok(s)
    }

    /// Restriction to a sublanguage (symbols matched by name).
    pub fn reduct(&self, lang: &Language) -> Result<Structure, StructureError> {
        let mut s = Structure::new(lang.clone(), self.size);
        for r in 0..lang.rel_count() {
            let name = &lang.rel(r).name;
            let src = self.lang.rel_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.clone()))?;
            s.rels[r] = self.rels[src].clone();
        }
        for f in 0..lang.fun_count() {
            let name = &lang.fun(f).name;
            let src = self.lang.fun_index(name).ok_or_else(|| StructureError::UnknownSymbol(name.clone()))?;
            s.funs[f] = self.funs[src].clone();
        }
        Ok(s)
    }

    pub fn to_draft(&self) -> StructureDraft {
        StructureDraft {
            lang: self.lang.clone(),
            size: self.size,
            rels: self.rels.iter().map(|s| s.iter().cloned().collect()).collect(),
            funs: self
                .funs
                .iter()
                .map(|m| m.iter().map(|(a, v)| (a.clone(), v.iter().copied().collect())).collect())
                .collect(),
        }
    }
}

/// Unvalidated structure content, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDraft {
    pub lang: Language,
    pub size: usize,
    pub rels: Vec<Vec<Vec<usize>>>,
    pub funs: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    OutOfRange { symbol: String, vertex: usize },
    Arity { symbol: String, expected: usize, found: usize },
    DuplicateTuple { symbol: String, tuple: Vec<usize> },
    DuplicateEntry { symbol: String, args: Vec<usize> },
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Issue::OutOfRange { symbol, vertex } => write!(f, "{symbol}: vertex {vertex} out of range"),
            Issue::Arity { symbol, expected, found } => write!(f, "{symbol}: arity {expected} expected, got {found}"),
            Issue::DuplicateTuple { symbol, tuple } => write!(f, "{symbol}: duplicate tuple {tuple:?}"),
            Issue::DuplicateEntry { symbol, args } => write!(f, "{symbol}: duplicate entry at {args:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub ordered: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate_structure(d: &StructureDraft) -> ValidationReport {
    let mut issues = Vec::new();
    let range = |symbol: &str, vs: &[usize], issues: &mut Vec<Issue>| {
        for &v in vs {
            if v >= d.size {
                issues.push(Issue::OutOfRange { symbol: symbol.to_string(), vertex: v });
            }
        }
    };
    for (r, ts) in d.rels.iter().enumerate() {
        let sym = d.lang.rel(r);
        let mut seen = BTreeSet::new();
        for t in ts {
            if t.len() != sym.arity {
                issues.push(Issue::Arity { symbol: sym.name.clone(), expected: sym.arity, found: t.len() });
            }
            range(&sym.name, t, &mut issues);
            if !seen.insert(t.clone()) {
                issues.push(Issue::DuplicateTuple { symbol: sym.name.clone(), tuple: t.clone() });
            }
        }
    }
    for (fi, es) in d.funs.iter().enumerate() {
        let sym = d.lang.fun(fi);
        let mut seen = BTreeSet::new();
        for (args, vals) in es {
            if args.len() != sym.arity {
                issues.push(Issue::Arity { symbol: sym.name.clone(), expected: sym.arity, found: args.len() });
            }
            range(&sym.name, args, &mut issues);
            range(&sym.name, vals, &mut issues);
            if !seen.insert(args.clone()) {
                issues.push(Issue::DuplicateEntry { symbol: sym.name.clone(), args: args.clone() });
            }
        }
    }
    let ordered = issues.is_empty() && d.build().map(|s| s.is_ordered()).unwrap_or(false);
    ValidationReport { issues, ordered }
}

impl StructureDraft {
    pub fn build(&self) -> Result<Structure, StructureError> {
        let mut s = Structure::new(self.lang.clone(), self.size);
        for (r, ts) in self.rels.iter().enumerate() {
            for t in ts {
                s.add_tuple(r, t.clone())?;
            }
        }
        for (f, es) in self.funs.iter().enumerate() {
            for (args, vals) in es {
                s.add_values(f, args.clone(), vals)?;
            }
        }
        Ok(s)
    }
}

/// Kind-tagged reference to a symbol of some language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymRef {
    pub kind: SymbolKind,
    pub index: usize,
}

/// Resolves symbol names (relations or functions) against a language.
pub fn resolve_symbols(lang: &Language, names: &[String]) -> Result<Vec<SymRef>, StructureError> {
    names
        .iter()
        .map(|n| {
            if let Some(i) = lang.rel_index(n) {
                Ok(SymRef { kind: SymbolKind::Relation, index: i })
            } else if let Some(i) = lang.fun_index(n) {
                Ok(SymRef { kind: SymbolKind::Function, index: i })
            } else {
                Err(StructureError::UnknownSymbol(n.clone()))
            }
        })
        .collect()
}
