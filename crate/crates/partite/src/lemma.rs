use std::collections::BTreeSet;

use halesjewett::{enumerate_parameter_words, hj_number, HjNumber, ParameterWord};
use structures::maps::is_u_closed_image;
use structures::{Constraints, MapSearch, SearchKind, Structure, SymRef};

use crate::power::{for_each_tuple, power, PowerLayout};
use crate::system::validate_partite;
use crate::{Caps, PartiteError, PartiteSystem};

/// Whether the exponent is large enough for the Ramsey statement to be
/// certified (`Full`) or only the construction and its maps are (`Witness`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Full,
    Witness,
}

/// Hales–Jewett number for two colors, when cheap to certify.
pub fn known_hj(sigma: usize) -> Option<usize> {
    match sigma {
        0 => None,
        1 => Some(1),
        2 => match hj_number(2, 2, 2, Some(1 << 16)) {
            Ok(HjNumber::Exact(n)) => Some(n),
            _ => None,
        },
        _ => None,
    }
}

pub fn mode_for(sigma: usize, exponent: usize) -> Mode {
    match known_hj(sigma) {
        Some(h) if exponent >= h => Mode::Full,
        _ => Mode::Witness,
    }
}

/// The alphabet: embeddings `e: a → b` with `π∘e = alpha`, optionally with
/// U-closed image, in lexicographic order.
pub fn alphabet(
    a: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    closed: Option<&[SymRef]>,
    caps: &Caps,
) -> Result<Vec<Vec<usize>>, PartiteError> {
    let parts = b.partitions();
    let domain = alpha.iter().map(|&p| parts.get(p).cloned().unwrap_or_default()).collect();
    let mut c = Constraints { domain: Some(domain), u_closed: None };
    if let Some(u) = closed {
        c = c.with_u_closed(u.to_vec());
    }
    Ok(MapSearch::new(a, &b.structure, SearchKind::Embedding).constraints(c).node_cap(caps.max_nodes).collect()?)
}

/// The maps `e_w: A → C` and `f_W: B → C` of a partite lemma output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteWitnesses {
    /// Letter `l` is the embedding `sigma[l]: A → B`.
    pub sigma: Vec<Vec<usize>>,
    pub alpha: Vec<usize>,
    pub layout: PowerLayout,
    base_projection: Vec<usize>,
    /// Vertex of A sitting over each predicate, if any.
    over: Vec<Option<usize>>,
}

impl PartiteWitnesses {
    fn new(sigma: Vec<Vec<usize>>, alpha: &[usize], layout: PowerLayout, b: &PartiteSystem) -> Self {
        let mut over = vec![None; b.predicates];
        for (v, &p) in alpha.iter().enumerate() {
            over[p] = Some(v);
        }
        PartiteWitnesses { sigma, alpha: alpha.to_vec(), layout, base_projection: b.projection.clone(), over }
    }

    pub fn exponent(&self) -> usize {
        self.layout.exponent
    }

    /// `e_w(a)(i) = w_i(a)`.
    pub fn e(&self, w: &[usize]) -> Vec<usize> {
        (0..self.alpha.len())
            .map(|a| {
                let coords: Vec<usize> = w.iter().map(|&l| self.sigma[l][a]).collect();
                self.layout.encode(self.alpha[a], &coords)
            })
            .collect()
    }

    /// `f_W(v)(i) = W_i(a)` for the vertex `a` over the partition of `v`, or `v` at λ.
    pub fn f(&self, w: &ParameterWord) -> Vec<usize> {
        self.base_projection
            .iter()
            .enumerate()
            .map(|(v, &p)| {
                let a = self.over[p];
                let coords: Vec<usize> = w
                    .letters()
                    .iter()
                    .map(|l| match (l, a) {
                        (Some(l), Some(a)) => self.sigma[*l][a],
                        _ => v,
                    })
                    .collect();
                self.layout.encode(p, &coords)
            })
            .collect()
    }

    pub fn parameter_words(&self) -> Vec<ParameterWord> {
        enumerate_parameter_words(self.sigma.len(), self.exponent())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteLemmaOutput {
    pub system: PartiteSystem,
    pub witnesses: PartiteWitnesses,
    pub mode: Mode,
}

fn check_alpha(alpha: &[usize], b: &PartiteSystem) -> Result<(), PartiteError> {
    let image: BTreeSet<usize> = alpha.iter().copied().collect();
    if image.len() != alpha.len() || alpha.iter().any(|&p| p >= b.predicates) {
        return Err(PartiteError::InvalidInput("predicate assignment of A is not injective".into()));
    }
    if let Some(v) = (0..b.size()).find(|&v| !image.contains(&b.projection[v])) {
        return Err(PartiteError::InvalidInput(format!("vertex {v} lies over a predicate outside A")));
    }
    Ok(())
}

/// Core of a partite lemma: the power (`induced`) or the union of the
/// `f_W`-images of `b` (non-induced), on the vertex set of the power.
pub(crate) fn build_core(
    a: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    n: usize,
    sigma: Vec<Vec<usize>>,
    induced: bool,
    caps: &Caps,
) -> Result<(PartiteSystem, PartiteWitnesses), PartiteError> {
    if induced {
        let (c, layout) = power(b, n, caps)?;
        return Ok((c, PartiteWitnesses::new(sigma, alpha, layout, b)));
    }
    if !b.structure.is_relational() {
        return Err(PartiteError::FunctionsUnsupported);
    }
    let layout = PowerLayout::new(b, n).filter(|l| l.size <= caps.max_vertices).ok_or(
        PartiteError::SizeCapExceeded { what: "vertices", limit: caps.max_vertices as u64 },
    )?;
    let w = PartiteWitnesses::new(sigma, alpha, layout, b);
    let words = w.parameter_words();
    let load = (words.len() as u64).saturating_mul(b.structure.tuple_count() as u64);
    if load > caps.max_tuples as u64 {
        return Err(PartiteError::SizeCapExceeded { what: "tuples", limit: caps.max_tuples as u64 });
    }
    let mut s = Structure::new(a.language().clone(), w.layout.size);
    for pw in &words {
        s.absorb(&b.structure, &w.f(pw));
    }
    let projection = w.layout.projection();
    Ok((PartiteSystem { structure: s, projection, predicates: b.predicates }, w))
}

/// Non-induced partite lemma for a transversal system `a` and a relational
/// system `b` over the same predicates.
pub fn partite_lemma(a: &PartiteSystem, b: &PartiteSystem, n: usize, caps: &Caps) -> Result<PartiteLemmaOutput, PartiteError> {
    let rep = validate_partite(a, None, None);
    if !rep.transversal || a.predicates != b.predicates {
        return Err(PartiteError::InvalidInput("A must be a transversal system over the predicates of B".into()));
    }
    lemma(&a.structure, b, &a.projection, n, None, false, caps)
}

/// Induced partite lemma: `b` is an `a`-partite system (predicate `p` is vertex
/// `p` of `a`). With `closed`, the alphabet holds only U-closed embeddings.
pub fn induced_partite_lemma(
    a: &Structure,
    b: &PartiteSystem,
    n: usize,
    closed: Option<&[SymRef]>,
    caps: &Caps,
) -> Result<PartiteLemmaOutput, PartiteError> {
    if b.predicates != a.size() {
        return Err(PartiteError::InvalidInput("B must have one predicate per vertex of A".into()));
    }
    let alpha: Vec<usize> = (0..a.size()).collect();
    lemma(a, b, &alpha, n, closed, true, caps)
}

fn lemma(
    a: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    n: usize,
    closed: Option<&[SymRef]>,
    induced: bool,
    caps: &Caps,
) -> Result<PartiteLemmaOutput, PartiteError> {
    if a.language() != b.structure.language() {
        return Err(PartiteError::LanguageMismatch);
    }
    check_alpha(alpha, b)?;
    let sigma = alphabet(a, b, alpha, closed, caps)?;
    if sigma.is_empty() {
        return Err(PartiteError::EmptyAlphabet);
    }
    let mode = mode_for(sigma.len(), n);
    let (system, witnesses) = build_core(a, b, alpha, n, sigma, induced, caps)?;
    Ok(PartiteLemmaOutput { system, witnesses, mode })
}

/// Whether every 2-coloring of the copies `e_w` of A has a monochromatic copy
/// `f_W` of B whose A-copies are all `e_w`s; exhaustive, for tiny alphabets.
pub fn certify_ramsey(w: &PartiteWitnesses) -> Option<bool> {
    let sigma = w.sigma.len();
    let words = sigma.checked_pow(w.exponent() as u32)?;
    if words > 20 {
        return None;
    }
    let lines: Vec<Vec<usize>> = w
        .parameter_words()
        .iter()
        .map(|pw| pw.line(sigma).iter().map(|x| halesjewett::word_index(x, sigma)).collect())
        .collect();
    let colors: Vec<usize> = vec![0, 1];
    let mut all = true;
    for_each_tuple(&colors, words, |chi| {
        all &= lines.iter().any(|l| l.iter().all(|&i| chi[i] == chi[l[0]]));
    });
    Some(all)
}

pub(crate) fn u_closed_in(map: &[usize], s: &Structure, u: Option<&[SymRef]>) -> bool {
    match u {
        None => true,
        Some(u) => is_u_closed_image(&map.iter().copied().collect(), s, u),
    }
}
