use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use structures::irreducible::{maximal_cliques, maximal_irreducible_sets, EXHAUSTIVE_LIMIT};
use structures::search::subsets_of_size;
use structures::{Constraints, Index, MapSearch, SearchKind, Structure};

use crate::lemma::{known_hj, Mode};
use crate::picture::{picture_step, PictureOptions, StepRecord};
use crate::{PartiteError, PartiteSystem};

/// Exponent used at each picture step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentPolicy {
    /// The same exponent everywhere; the Ramsey claim is certified only where it suffices.
    Witness(usize),
    /// Step `i` uses entry `i`, the last entry afterwards.
    PerStep(Vec<usize>),
    /// The Hales–Jewett number where it is cheaply known, `fallback` elsewhere.
    HjAttempt { fallback: usize },
}

impl ExponentPolicy {
    pub fn choose(&self, step: usize, sigma: usize) -> usize {
        match self {
            ExponentPolicy::Witness(n) => *n,
            ExponentPolicy::PerStep(v) => v.get(step).or(v.last()).copied().unwrap_or(1),
            ExponentPolicy::HjAttempt { fallback } => known_hj(sigma).unwrap_or(*fallback),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionOptions {
    pub exponent: ExponentPolicy,
    pub picture: PictureOptions,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions { exponent: ExponentPolicy::Witness(1), picture: PictureOptions::default() }
    }
}

/// Every picture of an iterated partite construction with its step records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTrace {
    /// The copies of B placed in the initial picture.
    pub betas: Vec<Vec<usize>>,
    /// The embeddings (or predicate assignments) of A, one per step.
    pub alphas: Vec<Vec<usize>>,
    /// `pictures[0]` is the initial picture, `pictures[i+1]` the result of step `i`.
    pub pictures: Vec<PartiteSystem>,
    pub steps: Vec<StepRecord>,
}

impl ConstructionTrace {
    pub fn final_system(&self) -> &PartiteSystem {
        self.pictures.last().expect("initial picture")
    }

    pub fn final_structure(&self) -> &Structure {
        &self.final_system().structure
    }

    /// `Full` when every step used an exponent certified by Hales–Jewett.
    pub fn mode(&self) -> Mode {
        if self.steps.iter().all(|s| s.mode == Mode::Full) {
            Mode::Full
        } else {
            Mode::Witness
        }
    }

    /// First irreducible set of some picture whose projection is not inside a
    /// copy of B, as `(picture, vertices)`.
    pub fn unprojected_irreducible(&self) -> Option<(usize, Vec<usize>)> {
        let images: Vec<BTreeSet<usize>> = self.betas.iter().map(|b| b.iter().copied().collect()).collect();
        for (i, p) in self.pictures.iter().enumerate() {
            let s = &p.structure;
            // Gaifman cliques over-approximate irreducible sets of large functional pictures.
            let sets = if s.is_relational() || s.size() <= EXHAUSTIVE_LIMIT {
                maximal_irreducible_sets(s)
            } else {
                maximal_cliques(&Index::new(s).neighbors)
            };
            for e in sets {
                let proj: BTreeSet<usize> = e.iter().map(|&v| p.projection[v]).collect();
                if !images.iter().any(|im| proj.is_subset(im)) {
                    return Some((i, e));
                }
            }
        }
        None
    }
}

fn initial_picture(b: &Structure, betas: &[Vec<usize>], predicates: usize) -> PartiteSystem {
    let k = b.size();
    let mut s = Structure::new(b.language().clone(), k * betas.len());
    let mut projection = Vec::with_capacity(k * betas.len());
    for (i, beta) in betas.iter().enumerate() {
        let map: Vec<usize> = (0..k).map(|v| i * k + v).collect();
        s.absorb(b, &map);
        projection.extend_from_slice(beta);
    }
    PartiteSystem { structure: s, projection, predicates }
}

fn run_steps(
    a: &Structure,
    start: PartiteSystem,
    alphas: &[Vec<usize>],
    induced: bool,
    opts: &ConstructionOptions,
) -> Result<(Vec<PartiteSystem>, Vec<StepRecord>), PartiteError> {
    if alphas.len() > opts.picture.caps.max_steps {
        return Err(PartiteError::StepCapExceeded(opts.picture.caps.max_steps));
    }
    let mut pictures = vec![start];
    let mut steps = Vec::with_capacity(alphas.len());
    for (i, alpha) in alphas.iter().enumerate() {
        let prev = pictures.last().expect("non-empty");
        let choose = |sigma: usize| opts.exponent.choose(i, sigma);
        let step = picture_step(a, prev, alpha, &choose, induced, &opts.picture)?;
        pictures.push(step.system);
        steps.push(step.record);
    }
    Ok((pictures, steps))
}

/// Iterated picture construction for `a ⊆ b` into the target `d`: one copy
/// of `b` per embedding into `d`, then one picture step per embedding of `a`
/// lying inside such a copy. With `closed` set, only U-closed embeddings of
/// `a` are used and only U-closed copies extended.
pub fn induced_construction(
    a: &Structure,
    b: &Structure,
    d: &Structure,
    opts: &ConstructionOptions,
) -> Result<ConstructionTrace, PartiteError> {
    if a.language() != b.language() || b.language() != d.language() {
        return Err(PartiteError::LanguageMismatch);
    }
    let cap = opts.picture.caps.max_nodes;
    let betas = MapSearch::new(b, d, SearchKind::Embedding).node_cap(cap).collect()?;
    if betas.is_empty() {
        return Err(PartiteError::NoEmbeddings);
    }
    let images: Vec<BTreeSet<usize>> = betas.iter().map(|b| b.iter().copied().collect()).collect();
    let mut c = Constraints::default();
    if let Some(u) = &opts.picture.closed {
        c = c.with_u_closed(u.clone());
    }
    let alphas: Vec<Vec<usize>> = MapSearch::new(a, d, SearchKind::Embedding)
        .constraints(c)
        .node_cap(cap)
        .collect()?
        .into_iter()
        .filter(|al| images.iter().any(|im| al.iter().all(|v| im.contains(v))))
        .collect();
    let start = initial_picture(b, &betas, d.size());
    let (pictures, steps) = run_steps(a, start, &alphas, true, opts)?;
    Ok(ConstructionTrace { betas, alphas, pictures, steps })
}

/// Rank of each vertex in the linear order `<` of an ordered structure.
fn ranks(s: &Structure) -> Result<Vec<usize>, PartiteError> {
    if !s.is_ordered() {
        return Err(PartiteError::NotOrdered);
    }
    let lt = s.language().order_index().ok_or(PartiteError::NotOrdered)?;
    let mut rank = vec![0; s.size()];
    for t in s.tuples(lt) {
        rank[t[1]] += 1;
    }
    Ok(rank)
}

/// Order-preserving injections of an ordered structure into `0..predicates`.
fn order_injections(s: &Structure, predicates: usize) -> Result<Vec<Vec<usize>>, PartiteError> {
    let rank = ranks(s)?;
    Ok(subsets_of_size(predicates, s.size()).into_iter().map(|set| rank.iter().map(|&r| set[r]).collect()).collect())
}

/// Non-induced construction for ordered `a`, `b` over `predicates` points:
/// one copy of `b` per order-preserving injection, one step per
/// order-preserving injection of `a`. Relational languages only.
pub fn non_induced_construction(
    a: &Structure,
    b: &Structure,
    predicates: usize,
    opts: &ConstructionOptions,
) -> Result<ConstructionTrace, PartiteError> {
    if a.language() != b.language() {
        return Err(PartiteError::LanguageMismatch);
    }
    if !b.is_relational() {
        return Err(PartiteError::FunctionsUnsupported);
    }
    let betas = order_injections(b, predicates)?;
    if betas.is_empty() {
        return Err(PartiteError::NoEmbeddings);
    }
    let alphas = order_injections(a, predicates)?;
    let start = initial_picture(b, &betas, predicates);
    let (pictures, steps) = run_steps(a, start, &alphas, false, opts)?;
    Ok(ConstructionTrace { betas, alphas, pictures, steps })
}

/// Least linear extension of the binary relation `rel` (smallest available
/// vertex first), or `None` on a cycle.
pub fn linear_extension(s: &Structure, rel: usize) -> Option<Vec<usize>> {
    let n = s.size();
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for t in s.tuples(rel) {
        if t[0] == t[1] {
            return None;
        }
        out[t[0]].push(t[1]);
        indeg[t[1]] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// `s` with its order relation completed to the least linear extension.
pub fn linearize(s: &Structure) -> Result<Structure, PartiteError> {
    let lt = s.language().order_index().ok_or(PartiteError::NotOrdered)?;
    let order = linear_extension(s, lt).ok_or(PartiteError::NotOrdered)?;
    let mut out = s.clone();
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            out.add_tuple(lt, vec![u, v]).expect("in range");
        }
    }
    Ok(out)
}

/// Both clauses of the poset invariant for relations `lt` (`<`) and `ll` (`≪`):
/// `≪ ⊆ <`, and the transitive closure of `≪` meets `<` only inside `≪`.
pub fn poset_invariant(s: &Structure, lt: usize, ll: usize) -> bool {
    if !s.tuples(ll).iter().all(|t| s.has_tuple(lt, t)) {
        return false;
    }
    let n = s.size();
    let mut out = vec![Vec::new(); n];
    for t in s.tuples(ll) {
        out[t[0]].push(t[1]);
    }
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut stack = out[start].clone();
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if s.has_tuple(lt, &[start, v]) && !s.has_tuple(ll, &[start, v]) {
                return false;
            }
            stack.extend(out[v].iter().copied());
        }
    }
    true
}
