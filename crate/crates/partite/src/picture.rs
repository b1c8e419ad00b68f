use std::collections::BTreeSet;

use structures::maps::is_embedding;
use structures::{Constraints, MapSearch, SearchKind, Structure, SymRef};

use crate::lemma::{alphabet, build_core, mode_for, u_closed_in, Mode};
use crate::{Caps, PartiteError, PartiteSystem};

/// Which embeddings of the restricted picture into its power get extended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionPolicy {
    /// Every projection-preserving embedding.
    AllEmbeddings,
    /// Only the maps `f_W`, one per parameter word.
    ParameterWords,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PictureOptions {
    pub extension: ExtensionPolicy,
    /// Restrict to U-closed alphabets and U-closed extensions.
    pub closed: Option<Vec<SymRef>>,
    pub caps: Caps,
}

impl Default for PictureOptions {
    fn default() -> Self {
        PictureOptions { extension: ExtensionPolicy::ParameterWords, closed: None, caps: Caps::default() }
    }
}

/// What one picture step did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub alpha: Vec<usize>,
    pub exponent: usize,
    /// Size of the alphabet.
    pub sigma: usize,
    pub mode: Mode,
    pub core_size: usize,
    /// Old vertices of the restricted picture, increasing.
    pub restricted: Vec<usize>,
    /// One map from the old picture into the new one per amalgamated copy.
    pub extensions: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PictureStep {
    pub system: PartiteSystem,
    pub record: StepRecord,
}

/// Induced picture lemma: `b` is a `d`-partite system and `alpha: a → d` an
/// embedding. The result is `(b, a)`-based with exponent `n`.
pub fn picture_lemma(
    a: &Structure,
    d: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    n: usize,
    opts: &PictureOptions,
) -> Result<PictureStep, PartiteError> {
    if !is_embedding(alpha, a, d) || b.predicates != d.size() {
        return Err(PartiteError::InvalidInput("alpha must embed A into the target of B".into()));
    }
    picture_step(a, b, alpha, &|_| n, true, opts)
}

/// Non-induced picture lemma over bare predicates; `alpha` is injective.
pub fn non_induced_picture(
    a: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    n: usize,
    opts: &PictureOptions,
) -> Result<PictureStep, PartiteError> {
    picture_step(a, b, alpha, &|_| n, false, opts)
}

pub(crate) fn picture_step(
    a: &Structure,
    b: &PartiteSystem,
    alpha: &[usize],
    exponent: &dyn Fn(usize) -> usize,
    induced: bool,
    opts: &PictureOptions,
) -> Result<PictureStep, PartiteError> {
    if a.language() != b.structure.language() {
        return Err(PartiteError::LanguageMismatch);
    }
    let caps = &opts.caps;
    let u = opts.closed.as_deref();
    let preds: BTreeSet<usize> = alpha.iter().copied().collect();
    if preds.len() != alpha.len() || alpha.iter().any(|&p| p >= b.predicates) {
        return Err(PartiteError::InvalidInput("alpha is not injective into the predicates".into()));
    }
    let (sub, old) = b.restrict(&preds);
    let sigma = alphabet(a, &sub, alpha, u, caps)?;
    let n = exponent(sigma.len());
    let mode = mode_for(sigma.len(), n);
    let sigma_size = sigma.len();
    let (core, w) = build_core(a, &sub, alpha, n, sigma, induced, caps)?;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    match opts.extension {
        ExtensionPolicy::ParameterWords => {
            for pw in w.parameter_words() {
                let g = w.f(&pw);
                if u_closed_in(&g, &core.structure, u) {
                    maps.push(g);
                }
            }
        }
        ExtensionPolicy::AllEmbeddings => {
            let mut c = Constraints::projection(&sub.projection, &core.projection);
            if let Some(u) = u {
                c = c.with_u_closed(u.to_vec());
            }
            let limit = caps.max_vertices;
            let mut over = false;
            MapSearch::new(&sub.structure, &core.structure, SearchKind::Embedding)
                .constraints(c)
                .node_cap(caps.max_nodes)
                .for_each(|g| {
                    maps.push(g.to_vec());
                    over = maps.len() > limit;
                    !over
                })?;
            if over {
                return Err(PartiteError::SizeCapExceeded { what: "vertices", limit: limit as u64 });
            }
        }
    }
    let fresh = b.size() - sub.size();
    let total = maps.len().checked_mul(fresh).and_then(|x| x.checked_add(core.size()));
    if total.is_none_or(|t| t > caps.max_vertices) {
        return Err(PartiteError::SizeCapExceeded { what: "vertices", limit: caps.max_vertices as u64 });
    }
    let load = (maps.len() as u64).saturating_mul(b.structure.tuple_count() as u64) + core.structure.tuple_count() as u64;
    if load > caps.max_tuples as u64 {
        return Err(PartiteError::SizeCapExceeded { what: "tuples", limit: caps.max_tuples as u64 });
    }
    let total = total.unwrap_or_default();
    let mut s = Structure::new(b.structure.language().clone(), total);
    let identity: Vec<usize> = (0..core.size()).collect();
    s.absorb(&core.structure, &identity);
    let mut projection = core.projection.clone();
    let mut slot = vec![usize::MAX; b.size()];
    for (i, &v) in old.iter().enumerate() {
        slot[v] = i;
    }
    let mut extensions = Vec::with_capacity(maps.len());
    for g in &maps {
        let ext: Vec<usize> = (0..b.size())
            .map(|v| {
                if slot[v] != usize::MAX {
                    g[slot[v]]
                } else {
                    projection.push(b.projection[v]);
                    projection.len() - 1
                }
            })
            .collect();
        s.absorb(&b.structure, &ext);
        extensions.push(ext);
    }
    let record = StepRecord {
        alpha: alpha.to_vec(),
        exponent: n,
        sigma: sigma_size,
        mode,
        core_size: core.size(),
        restricted: old,
        extensions,
    };
    Ok(PictureStep { system: PartiteSystem { structure: s, projection, predicates: b.predicates }, record })
}
