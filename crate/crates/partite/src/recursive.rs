use std::collections::BTreeSet;

use structures::maps::{compose, is_u_closed_image};
use structures::{MapSearch, SearchKind, Structure, SymRef};

use crate::construction::{
    induced_construction, linearize, non_induced_construction, ConstructionOptions, ConstructionTrace,
};
use crate::lemma::alphabet;
use crate::picture::{picture_step, PictureOptions, StepRecord};
use crate::system::validate_partite;
use crate::{PartiteError, PartiteSystem};

/// Where the target `D` with `D ⟶ (B)^A_2` comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSource {
    Given(Structure),
    /// Non-induced construction over this many predicates, then linearized.
    NonInduced { predicates: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedOptions {
    pub target: TargetSource,
    /// Exponents, extension policy and caps; the closure symbols are supplied separately.
    pub construction: ConstructionOptions,
}

/// One outer step: the little picture, its pruning and the inner construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedStep {
    pub alpha: Vec<usize>,
    /// No U-closed embedding of A lies over `alpha`, so the picture is kept.
    pub skipped: bool,
    pub little: Option<StepRecord>,
    /// Size of the little picture after pruning to U-closed copies.
    pub pruned_size: usize,
    pub inner: Option<ConstructionTrace>,
    /// A U-closed embedding of the previous picture into the next, when tracked.
    pub link: Option<Vec<usize>>,
    /// U-transversality of every inner picture.
    pub inner_transversal: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedConstruction {
    pub target: Structure,
    pub target_trace: Option<ConstructionTrace>,
    pub alphas: Vec<Vec<usize>>,
    pub pictures: Vec<PartiteSystem>,
    pub steps: Vec<ClosedStep>,
    /// Set instead of `steps` when no closure symbols were given.
    pub induced: Option<ConstructionTrace>,
    pub structure: Structure,
    /// Copies of B in `structure` traced from the initial picture.
    pub copies: Vec<Vec<usize>>,
    /// U-transversality of every outer picture over the target.
    pub transversal: Vec<bool>,
}

fn target(a: &Structure, b: &Structure, opts: &ClosedOptions) -> Result<(Structure, Option<ConstructionTrace>), PartiteError> {
    match &opts.target {
        TargetSource::Given(d) => Ok((d.clone(), None)),
        TargetSource::NonInduced { predicates } => {
            let mut o = opts.construction.clone();
            o.picture.closed = None;
            let t = non_induced_construction(a, b, *predicates, &o)?;
            let d = linearize(t.final_structure())?;
            Ok((d, Some(t)))
        }
    }
}

/// Closed Ramsey construction for ordered `a`, `b` over a relational
/// encoding in which the relations `u` stand for set-valued functions.
pub fn recursive_closed_construction(
    a: &Structure,
    b: &Structure,
    u: &[SymRef],
    opts: &ClosedOptions,
) -> Result<ClosedConstruction, PartiteError> {
    if a.language() != b.language() {
        return Err(PartiteError::LanguageMismatch);
    }
    if !a.is_ordered() || !b.is_ordered() {
        return Err(PartiteError::NotOrdered);
    }
    if !b.is_relational() {
        return Err(PartiteError::FunctionsUnsupported);
    }
    let (d, target_trace) = target(a, b, opts)?;
    let caps = opts.construction.picture.caps.clone();
    if u.is_empty() {
        let t = induced_construction(a, b, &d, &opts.construction)?;
        let mut copies = first_copies(&t);
        for step in &t.steps {
            match step.extensions.first() {
                Some(e) => copies = copies.iter().map(|c| compose(e, c)).collect(),
                None => {
                    copies.clear();
                    break;
                }
            }
        }
        let transversal = t.pictures.iter().map(|p| validate_partite(p, Some(&d), Some(u)).is_valid()).collect();
        return Ok(ClosedConstruction {
            target: d,
            target_trace,
            alphas: t.alphas.clone(),
            pictures: t.pictures.clone(),
            steps: Vec::new(),
            structure: t.final_structure().clone(),
            induced: Some(t),
            copies,
            transversal,
        });
    }
    let betas = MapSearch::new(b, &d, SearchKind::Embedding).node_cap(caps.max_nodes).collect()?;
    if betas.is_empty() {
        return Err(PartiteError::NoEmbeddings);
    }
    let alphas = MapSearch::new(a, &d, SearchKind::Embedding).node_cap(caps.max_nodes).collect()?;
    if alphas.len() > caps.max_steps {
        return Err(PartiteError::StepCapExceeded(caps.max_steps));
    }
    let k = b.size();
    let mut p0 = Structure::new(b.language().clone(), k * betas.len());
    let mut proj0 = Vec::new();
    let mut copies = Vec::new();
    for (i, beta) in betas.iter().enumerate() {
        let map: Vec<usize> = (0..k).map(|v| i * k + v).collect();
        p0.absorb(b, &map);
        proj0.extend_from_slice(beta);
        copies.push(map);
    }
    let mut pictures = vec![PartiteSystem::new(p0, proj0, d.size())];
    let popts = PictureOptions { closed: Some(u.to_vec()), ..opts.construction.picture.clone() };
    let mut inner_opts = opts.construction.clone();
    inner_opts.picture.closed = Some(u.to_vec());
    let mut steps = Vec::with_capacity(alphas.len());
    for (i, alpha) in alphas.iter().enumerate() {
        let prev = pictures.last().expect("non-empty").clone();
        if alphabet(a, &prev, alpha, Some(u), &caps)?.is_empty() {
            steps.push(ClosedStep {
                alpha: alpha.clone(),
                skipped: true,
                little: None,
                pruned_size: 0,
                inner: None,
                link: Some((0..prev.size()).collect()),
                inner_transversal: Vec::new(),
            });
            pictures.push(prev);
            continue;
        }
        let choose = |sigma: usize| opts.construction.exponent.choose(i, sigma);
        let little = picture_step(a, &prev, alpha, &choose, true, &popts)?;
        let o = prune(&prev, &little.system, &little.record.extensions, u);
        if o.size() == 0 {
            return Err(PartiteError::NoEmbeddings);
        }
        let a_lp = PartiteSystem::new(a.clone(), alpha.clone(), d.size()).to_lp_structure();
        let b_lp = prev.to_lp_structure();
        let o_lp = o.to_lp_structure();
        let inner = induced_construction(&a_lp, &b_lp, &o_lp, &inner_opts)?;
        let inner_transversal =
            inner.pictures.iter().map(|p| validate_partite(p, Some(&o_lp), Some(u)).is_valid()).collect();
        let plus = inner.final_system();
        let structure = plus.structure.reduct(prev.structure.language()).map_err(|e| PartiteError::InvalidInput(e.to_string()))?;
        let projection = plus.projection.iter().map(|&x| o.projection[x]).collect();
        let next = PartiteSystem::new(structure, projection, d.size());
        // The first copy of the previous picture, carried through the first extension of each step.
        let mut link: Option<Vec<usize>> = Some((0..prev.size()).collect());
        for s in &inner.steps {
            link = match (link, s.extensions.first()) {
                (Some(l), Some(e)) => Some(compose(e, &l)),
                _ => None,
            };
        }
        copies = match &link {
            Some(l) => copies.iter().map(|c| compose(l, c)).collect(),
            None => Vec::new(),
        };
        steps.push(ClosedStep {
            alpha: alpha.clone(),
            skipped: false,
            little: Some(little.record),
            pruned_size: o.size(),
            inner: Some(inner),
            link,
            inner_transversal,
        });
        pictures.push(next);
    }
    let transversal = pictures.iter().map(|p| validate_partite(p, Some(&d), Some(u)).is_valid()).collect();
    let last = &pictures.last().expect("non-empty").structure;
    let structure = if last.language().order_index().is_some() { linearize(last)? } else { last.clone() };
    Ok(ClosedConstruction {
        target: d,
        target_trace,
        alphas,
        pictures,
        steps,
        induced: None,
        structure,
        copies,
        transversal,
    })
}

fn first_copies(t: &ConstructionTrace) -> Vec<Vec<usize>> {
    let k = t.pictures[0].size() / t.betas.len().max(1);
    (0..t.betas.len()).map(|i| (0..k).map(|v| i * k + v).collect()).collect()
}

/// Keeps exactly the vertices and tuples of the U-closed copies of `p` in `o`.
fn prune(p: &PartiteSystem, o: &PartiteSystem, copies: &[Vec<usize>], u: &[SymRef]) -> PartiteSystem {
    let closed: Vec<&Vec<usize>> =
        copies.iter().filter(|c| is_u_closed_image(&c.iter().copied().collect(), &o.structure, u)).collect();
    let keep: BTreeSet<usize> = closed.iter().flat_map(|c| c.iter().copied()).collect();
    let mut index = vec![usize::MAX; o.size()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let mut s = Structure::new(o.structure.language().clone(), keep.len());
    for c in &closed {
        let map: Vec<usize> = c.iter().map(|&v| index[v]).collect();
        s.absorb(&p.structure, &map);
    }
    let projection = keep.iter().map(|&v| o.projection[v]).collect();
    PartiteSystem::new(s, projection, o.predicates)
}
