use std::collections::{BTreeMap, BTreeSet};

use amalgamation::{free_amalgam, tree_amalgam, AmalgamationProblem, TreeAmalgamSpec, TreeError, TreeRecipe};
use structures::maps::{classify_map, compose, is_homomorphism_embedding};
use structures::search::subsets_of_size;
use structures::{
    is_irreducible, maximal_irreducible_sets, Constraints, MapKind, MapSearch, SearchKind, Structure,
};
use thiserror::Error;

use crate::construction::{induced_construction, ConstructionOptions, ConstructionTrace};
use crate::PartiteError;

/// A copy of B amalgamated over a maximal irreducible set of the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCert {
    pub clique: Vec<usize>,
    /// Copy of B in the last intermediate structure covering the projection of `clique`.
    pub beta: Vec<usize>,
    /// The amalgamated copy `B → C`.
    pub copy: Vec<usize>,
}

/// A tree amalgam of copies of B with a homomorphism-embedding of the substructure on `subset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeWitness {
    pub subset: Vec<usize>,
    pub spec: TreeAmalgamSpec,
    /// `map[i]` is the image of `subset[i]`.
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsenResult {
    pub structure: Structure,
    /// Homomorphism-embedding into the input structure.
    pub projection: Vec<usize>,
    pub traces: Vec<ConstructionTrace>,
    pub extensions: Vec<ExtensionCert>,
    pub witnesses: Vec<TreeWitness>,
    /// Substructures for which no witness could be assembled.
    pub unresolved: Vec<Vec<usize>>,
}

/// Iterates the induced construction `n` times starting from `c0`, then
/// amalgamates a copy of `b` over every maximal irreducible set, and builds
/// tree-amalgam witnesses for every substructure on at most `n` vertices.
pub fn sparsen(
    a: &Structure,
    b: &Structure,
    c0: &Structure,
    n: usize,
    opts: &ConstructionOptions,
) -> Result<SparsenResult, PartiteError> {
    if !b.is_relational() {
        return Err(PartiteError::FunctionsUnsupported);
    }
    if !is_irreducible(a).irreducible {
        return Err(PartiteError::InvalidInput("A must be irreducible".into()));
    }
    if n == 0 {
        let id = (0..c0.size()).collect();
        return Ok(SparsenResult {
            structure: c0.clone(),
            projection: id,
            traces: Vec::new(),
            extensions: Vec::new(),
            witnesses: Vec::new(),
            unresolved: Vec::new(),
        });
    }
    let mut current = c0.clone();
    let mut projection: Vec<usize> = (0..c0.size()).collect();
    let mut traces = Vec::with_capacity(n);
    for _ in 0..n {
        let t = induced_construction(a, b, &current, opts)?;
        let fin = t.final_system();
        projection = compose(&projection, &fin.projection);
        current = fin.structure.clone();
        traces.push(t);
    }
    let last = traces.last().expect("n >= 1");
    let pi = &last.final_system().projection;
    let images: Vec<BTreeSet<usize>> = last.betas.iter().map(|x| x.iter().copied().collect()).collect();
    let mut c = current;
    let mut extensions = Vec::new();
    let caps = &opts.picture.caps;
    for clique in maximal_irreducible_sets(&c) {
        let proj: BTreeSet<usize> = clique.iter().map(|&v| pi[v]).collect();
        let Some(k) = images.iter().position(|im| proj.is_subset(im)) else {
            return Err(PartiteError::InvalidInput("irreducible set outside every copy of B".into()));
        };
        let beta = last.betas[k].clone();
        let over: BTreeMap<usize, usize> = clique.iter().map(|&v| (pi[v], v)).collect();
        let mut copy = Vec::with_capacity(b.size());
        for &t in &beta {
            match over.get(&t) {
                Some(&v) => copy.push(v),
                None => {
                    copy.push(c.add_vertices(1));
                    projection.push(projection_of(&traces, t));
                }
            }
        }
        if c.size() > caps.max_vertices {
            return Err(PartiteError::SizeCapExceeded { what: "vertices", limit: caps.max_vertices as u64 });
        }
        c.absorb(b, &copy);
        extensions.push(ExtensionCert { clique, beta, copy });
    }
    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for k in 1..=n.min(c.size()) {
        for subset in subsets_of_size(c.size(), k) {
            match tree_witness(&c, b, &extensions, &subset) {
                Some((spec, map)) => witnesses.push(TreeWitness { subset, spec, map }),
                None => unresolved.push(subset),
            }
        }
    }
    Ok(SparsenResult { structure: c, projection, traces, extensions, witnesses, unresolved })
}

/// Image in the input structure of a vertex of the last intermediate structure.
fn projection_of(traces: &[ConstructionTrace], v: usize) -> usize {
    traces[..traces.len() - 1].iter().rev().fold(v, |x, t| t.final_system().projection[x])
}

/// Tree recipe and map for `set`: a single copy when `set` is irreducible,
/// otherwise the join of witnesses for a decomposition over an irreducible overlap.
fn tree_witness(c: &Structure, b: &Structure, ext: &[ExtensionCert], set: &[usize]) -> Option<(TreeAmalgamSpec, Vec<usize>)> {
    let (recipe, _, map) = build(c, b, ext, set)?;
    Some((TreeAmalgamSpec { leaf: b.clone(), recipe }, map))
}

fn build(c: &Structure, b: &Structure, ext: &[ExtensionCert], set: &[usize]) -> Option<(TreeRecipe, Structure, Vec<usize>)> {
    let vs: BTreeSet<usize> = set.iter().copied().collect();
    let (sub, old) = c.induced(&vs).ok()?;
    let irr = is_irreducible(&sub);
    if irr.irreducible {
        let e = ext.iter().find(|e| set.iter().all(|v| e.copy.contains(v)))?;
        let map = set.iter().map(|v| e.copy.iter().position(|w| w == v).expect("contained")).collect();
        return Some((TreeRecipe::Leaf, b.clone(), map));
    }
    let (x, y) = irr.witness?;
    let xs: Vec<usize> = x.iter().map(|&i| old[i]).collect();
    let ys: Vec<usize> = y.iter().map(|&i| old[i]).collect();
    let (lr, lt, lm) = build(c, b, ext, &xs)?;
    let (rr, rt, rm) = build(c, b, ext, &ys)?;
    let common: Vec<usize> = xs.iter().copied().filter(|v| ys.contains(v)).collect();
    let (overlap, _) = c.induced(&common.iter().copied().collect()).ok()?;
    let at = |m: &[usize], from: &[usize], v: usize| m[from.iter().position(|&w| w == v).expect("member")];
    let f1: Vec<usize> = common.iter().map(|&v| at(&lm, &xs, v)).collect();
    let f2: Vec<usize> = common.iter().map(|&v| at(&rm, &ys, v)).collect();
    let am = free_amalgam(&AmalgamationProblem {
        base: overlap.clone(),
        left: lt,
        right: rt,
        alpha1: f1.clone(),
        alpha2: f2.clone(),
    });
    let map = set
        .iter()
        .map(|&v| if xs.contains(&v) { am.beta1[at(&lm, &xs, v)] } else { am.beta2[at(&rm, &ys, v)] })
        .collect();
    Some((TreeRecipe::join(lr, rr, overlap, f1, f2), am.structure, map))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreelikeVerdict {
    Valid,
    /// The leaf of the recipe is not B.
    WrongLeaf,
    InvalidTree(TreeError),
    /// The map is not a homomorphism-embedding; carries its actual class.
    NotHomomorphismEmbedding(Option<MapKind>),
    /// No copy of A in the tree covers the image of this embedding's trace.
    AlphaCovering { alpha: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreelikeReport {
    pub verdicts: Vec<(Vec<usize>, TreelikeVerdict)>,
}

impl TreelikeReport {
    pub fn all_valid(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| *v == TreelikeVerdict::Valid)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreelikeError {
    #[error("no witness for the substructure on {0:?}")]
    MissingWitness(Vec<usize>),
    #[error(transparent)]
    Partite(#[from] PartiteError),
}

/// Validates supplied witnesses for every substructure of `c` on at most `n` vertices.
pub fn is_locally_treelike(
    c: &Structure,
    a: &Structure,
    b: &Structure,
    n: usize,
    witnesses: &[TreeWitness],
) -> Result<TreelikeReport, TreelikeError> {
    let by_subset: BTreeMap<&[usize], &TreeWitness> = witnesses.iter().map(|w| (w.subset.as_slice(), w)).collect();
    let alphas = MapSearch::new(a, c, SearchKind::Embedding).collect().map_err(PartiteError::from)?;
    let mut verdicts = Vec::new();
    for k in 1..=n.min(c.size()) {
        for subset in subsets_of_size(c.size(), k) {
            let w = by_subset.get(subset.as_slice()).ok_or_else(|| TreelikeError::MissingWitness(subset.clone()))?;
            verdicts.push((subset.clone(), check_witness(c, a, b, &subset, w, &alphas)));
        }
    }
    Ok(TreelikeReport { verdicts })
}

fn check_witness(c: &Structure, a: &Structure, b: &Structure, subset: &[usize], w: &TreeWitness, alphas: &[Vec<usize>]) -> TreelikeVerdict {
    if w.spec.leaf != *b {
        return TreelikeVerdict::WrongLeaf;
    }
    let t = match tree_amalgam(&w.spec) {
        Ok(t) => t.structure,
        Err(e) => return TreelikeVerdict::InvalidTree(e),
    };
    let (sub, _) = c.induced(&subset.iter().copied().collect()).expect("relational");
    if w.map.len() != sub.size() || w.map.iter().any(|&x| x >= t.size()) || !is_homomorphism_embedding(&w.map, &sub, &t) {
        let kind = if w.map.len() == sub.size() && w.map.iter().all(|&x| x < t.size()) {
            classify_map(&w.map, &sub, &t, None)
        } else {
            None
        };
        return TreelikeVerdict::NotHomomorphismEmbedding(kind);
    }
    let mut seen = BTreeSet::new();
    for alpha in alphas {
        let partial: Vec<Option<usize>> =
            alpha.iter().map(|v| subset.iter().position(|s| s == v).map(|i| w.map[i])).collect();
        if !seen.insert(partial.clone()) {
            continue;
        }
        let domain = partial.iter().map(|p| p.map_or_else(|| (0..t.size()).collect(), |x| vec![x])).collect();
        let found = MapSearch::new(a, &t, SearchKind::Embedding)
            .constraints(Constraints { domain: Some(domain), u_closed: None })
            .first()
            .ok()
            .flatten();
        if found.is_none() {
            return TreelikeVerdict::AlphaCovering { alpha: alpha.clone() };
        }
    }
    TreelikeVerdict::Valid
}
