use std::collections::HashMap;

use structures::maps::{compose, is_embedding};
use structures::{maximal_irreducible_sets, partial_automorphisms, PartialAutomorphism, Structure};

use crate::search::automorphism_within;
use crate::EppaError;

/// `small` sits inside `witness` via `inclusion`.
#[derive(Clone, Debug)]
pub struct EppaInstance {
    pub small: Structure,
    pub witness: Structure,
    pub inclusion: Vec<usize>,
}

impl EppaInstance {
    pub fn new(small: Structure, witness: Structure, inclusion: Vec<usize>) -> Result<Self, EppaError> {
        if !is_embedding(&inclusion, &small, &witness) {
            return Err(EppaError::InclusionNotEmbedding);
        }
        Ok(EppaInstance { small, witness, inclusion })
    }

    /// The identity inclusion of a structure into itself.
    pub fn trivial(s: Structure) -> Self {
        let inclusion = (0..s.size()).collect();
        EppaInstance { small: s.clone(), witness: s, inclusion }
    }
}

/// Partial automorphisms of the small structure paired with automorphisms
/// of the witness, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTable {
    pub entries: Vec<(PartialAutomorphism, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EppaVerdict {
    Verified(ExtensionTable),
    Fails(PartialAutomorphism),
}

impl EppaVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, EppaVerdict::Verified(_))
    }
}

/// Least automorphism of `inst.witness` extending `p` transported along the inclusion.
pub fn extend_partial(inst: &EppaInstance, p: &PartialAutomorphism, node_cap: u64) -> Result<Option<Vec<usize>>, EppaError> {
    let n = inst.witness.size();
    let mut domain: Vec<Vec<usize>> = vec![(0..n).collect(); n];
    for (&d, &m) in p.domain.iter().zip(&p.map) {
        domain[inst.inclusion[d]] = vec![inst.inclusion[m]];
    }
    Ok(automorphism_within(&inst.witness, &domain, node_cap)?)
}

/// Extends every partial automorphism of the small structure, or returns the
/// first one that has no extension.
pub fn is_eppa_witness(inst: &EppaInstance, node_cap: u64) -> Result<EppaVerdict, EppaError> {
    if !is_embedding(&inst.inclusion, &inst.small, &inst.witness) {
        return Err(EppaError::InclusionNotEmbedding);
    }
    let mut entries = Vec::new();
    for p in partial_automorphisms(&inst.small, None) {
        match extend_partial(inst, &p, node_cap)? {
            Some(g) => entries.push((p, g)),
            None => return Ok(EppaVerdict::Fails(p)),
        }
    }
    Ok(EppaVerdict::Verified(ExtensionTable { entries }))
}

/// Every entry is an automorphism of the witness extending its partial map.
pub fn replay_table(inst: &EppaInstance, table: &ExtensionTable) -> bool {
    let w = &inst.witness;
    table.entries.iter().all(|(p, g)| {
        p.verify(&inst.small)
            && g.len() == w.size()
            && is_embedding(g, w, w)
            && p.domain.iter().zip(&p.map).all(|(&d, &m)| g[inst.inclusion[d]] == inst.inclusion[m])
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    Coherent,
    /// `(f, g)` with `Dom(g) = Range(f)` and `Ψ(g∘f) ≠ Ψ(g)∘Ψ(f)`.
    Violation(PartialAutomorphism, PartialAutomorphism),
}

/// Checks `Ψ(g∘f) = Ψ(g)∘Ψ(f)` on every composable pair, in table order.
pub fn check_coherence(inst: &EppaInstance, table: &ExtensionTable) -> Result<Coherence, EppaError> {
    let lookup: HashMap<(&[usize], &[usize]), &Vec<usize>> =
        table.entries.iter().map(|(p, g)| ((p.domain.as_slice(), p.map.as_slice()), g)).collect();
    let all = partial_automorphisms(&inst.small, None);
    for p in &all {
        if !lookup.contains_key(&(p.domain.as_slice(), p.map.as_slice())) {
            return Err(EppaError::IncompleteTable(p.domain.clone(), p.map.clone()));
        }
    }
    for f in &all {
        let mut range = f.map.clone();
        range.sort_unstable();
        for g in all.iter().filter(|g| g.domain == range) {
            let gf = PartialAutomorphism {
                domain: f.domain.clone(),
                map: f.map.iter().map(|&x| g.image_of(x).expect("composable")).collect(),
            };
            let psi_gf = lookup[&(gf.domain.as_slice(), gf.map.as_slice())];
            let psi_f = lookup[&(f.domain.as_slice(), f.map.as_slice())];
            let psi_g = lookup[&(g.domain.as_slice(), g.map.as_slice())];
            if *psi_gf != compose(psi_g, psi_f) {
                return Ok(Coherence::Violation(f.clone(), g.clone()));
            }
        }
    }
    Ok(Coherence::Coherent)
}

/// Least maximal irreducible vertex set of the witness that no automorphism
/// moves into the copy of the small structure; `None` when faithful.
pub fn is_irreducible_faithful(inst: &EppaInstance, node_cap: u64) -> Result<Option<Vec<usize>>, EppaError> {
    let n = inst.witness.size();
    let copy: Vec<usize> = {
        let mut c = inst.inclusion.clone();
        c.sort_unstable();
        c
    };
    for d in maximal_irreducible_sets(&inst.witness) {
        let mut domain: Vec<Vec<usize>> = vec![(0..n).collect(); n];
        for &v in &d {
            domain[v] = copy.clone();
        }
        if automorphism_within(&inst.witness, &domain, node_cap)?.is_none() {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Amalgam of `b1` and `b2` over `a` read off an EPPA witness of a joint
/// embedding `c`: the partial automorphism of `c` carrying the first copy of
/// `a` onto the second extends to `g`, and `g` realigns `b1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EppaAmalgam {
    pub structure: Structure,
    pub beta1: Vec<usize>,
    pub beta2: Vec<usize>,
    pub automorphism: Vec<usize>,
}

pub fn amalgamate_via_eppa(
    alpha1: &[usize],
    alpha2: &[usize],
    i1: &[usize],
    i2: &[usize],
    joint: &EppaInstance,
    node_cap: u64,
) -> Result<EppaAmalgam, EppaError> {
    let from = compose(i1, alpha1);
    let to = compose(i2, alpha2);
    let mut pairs: Vec<(usize, usize)> = from.into_iter().zip(to).collect();
    pairs.sort_unstable();
    let p = PartialAutomorphism { domain: pairs.iter().map(|x| x.0).collect(), map: pairs.iter().map(|x| x.1).collect() };
    if !p.verify(&joint.small) {
        return Err(EppaError::NoExtension);
    }
    let g = extend_partial(joint, &p, node_cap)?.ok_or(EppaError::NoExtension)?;
    Ok(EppaAmalgam {
        structure: joint.witness.clone(),
        beta1: compose(&g, &compose(&joint.inclusion, i1)),
        beta2: compose(&joint.inclusion, i2),
        automorphism: g,
    })
}

