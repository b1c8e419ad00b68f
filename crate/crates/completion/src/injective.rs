use std::collections::BTreeSet;

use amalgamation::{free_amalgam, AmalgamationProblem};
use structures::maps::is_homomorphism_embedding;
use structures::Structure;

use crate::CompletionError;

/// Removes collisions of a homomorphism-embedding one at a time: for the
/// largest vertex `y` sharing its image `p` with another vertex, `b` is
/// replaced by the free (hence strong) amalgam of two copies of itself over
/// the image of everything not sent to `p`, and `y` moves to the second copy.
pub fn injectivize_homomorphism_embedding(
    a: &Structure,
    b: &Structure,
    f: &[usize],
) -> Result<(Structure, Vec<usize>), CompletionError> {
    if !a.is_relational() || !b.is_relational() {
        return Err(CompletionError::NotRelational);
    }
    if f.len() != a.size() || !is_homomorphism_embedding(f, a, b) {
        return Err(CompletionError::NotHomomorphismEmbedding);
    }
    let mut b = b.clone();
    let mut f = f.to_vec();
    while let Some(y) = (0..f.len()).rev().find(|&y| (0..y).any(|x| f[x] == f[y])) {
        let p = f[y];
        let rest: BTreeSet<usize> = f.iter().copied().filter(|&w| w != p).collect();
        let (base, old) = b.induced(&rest).expect("relational sets are closed");
        let problem = AmalgamationProblem::new(base, b.clone(), b.clone(), old.clone(), old).expect("inclusions");
        let am = free_amalgam(&problem);
        f = f.iter().enumerate().map(|(v, &w)| if v == y { am.beta2[w] } else { am.beta1[w] }).collect();
        b = am.structure;
    }
    debug_assert!(is_homomorphism_embedding(&f, a, &b));
    Ok((b, f))
}
