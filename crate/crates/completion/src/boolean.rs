use structures::maps::is_embedding;
use structures::{embeddings, Language, Structure, ORDER};

use crate::CompletionError;

/// Largest atom count for which algebras are built explicitly.
pub const MAX_ATOMS: usize = 4;

/// Powerset algebra of `k` atoms with the antilexicographic order. Vertex
/// `x` is the subset with bitmask `x` (bit `i` is atom `a_i`); `x < y` iff
/// the least atom on which they differ lies in `x`.
pub fn ordered_boolean_algebra(k: usize) -> Structure {
    let mut lang = Language::new();
    let lt = lang.add_relation(ORDER, 2).expect("fresh");
    let join = lang.add_function("join", 2).expect("fresh");
    let meet = lang.add_function("meet", 2).expect("fresh");
    let neg = lang.add_function("neg", 1).expect("fresh");
    let zero = lang.add_function("zero", 0).expect("fresh");
    let one = lang.add_function("one", 0).expect("fresh");
    let n = 1usize << k;
    let full = n - 1;
    let mut s = Structure::new(lang, n);
    for x in 0..n {
        for y in 0..n {
            let diff = x ^ y;
            if diff != 0 && x >> diff.trailing_zeros() & 1 == 1 {
                s.add_tuple(lt, vec![x, y]).expect("in range");
            }
            s.add_values(join, vec![x, y], &[x | y]).expect("in range");
            s.add_values(meet, vec![x, y], &[x & y]).expect("in range");
        }
        s.add_values(neg, vec![x], &[full & !x]).expect("in range");
    }
    s.add_values(zero, vec![], &[0]).expect("in range");
    s.add_values(one, vec![], &[full]).expect("in range");
    s
}

/// Rigid surjections `{0..m} → {0..k}` (first occurrences in increasing
/// order), lexicographically.
pub fn enumerate_rigid_surjections(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            if used == k {
                out.push(cur.clone());
            }
            return;
        }
        // Not enough positions left to introduce the missing values.
        if k - used > m - cur.len() {
            return;
        }
        for v in 0..=used.min(k - 1) {
            cur.push(v);
            rec(m, k, cur, used.max(v + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= m {
        rec(m, k, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// `X ↦ g⁻¹[X]` on bitmasks.
pub fn preimage_map(g: &[usize], k: usize) -> Vec<usize> {
    (0..1usize << k).map(|x| g.iter().enumerate().filter(|&(_, &a)| x >> a & 1 == 1).fold(0, |acc, (j, _)| acc | 1 << j)).collect()
}

/// Reads the surjection back off an embedding: `g(b_j)` is the atom whose image contains `b_j`.
pub fn surjection_of(f: &[usize], m: usize, k: usize) -> Vec<usize> {
    (0..m).map(|j| (0..k).find(|&x| f[1 << x] >> j & 1 == 1).unwrap_or(usize::MAX)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaCorrespondence {
    pub surjections: Vec<Vec<usize>>,
    /// `embeddings[i]` is induced by `surjections[i]`.
    pub embeddings: Vec<Vec<usize>>,
    /// Embeddings found by exhaustive search.
    pub searched: usize,
    /// Every induced map certifies as an embedding.
    pub certified: bool,
    /// Searched embeddings and induced maps coincide, and both directions invert each other.
    pub round_trip: bool,
}

impl BaCorrespondence {
    pub fn holds(&self) -> bool {
        self.certified && self.round_trip && self.searched == self.surjections.len()
    }
}

pub fn ba_embedding_correspondence(m: usize, k: usize) -> Result<BaCorrespondence, CompletionError> {
    if m > MAX_ATOMS {
        return Err(CompletionError::TooLarge(m));
    }
    let a = ordered_boolean_algebra(k);
    let b = ordered_boolean_algebra(m);
    let surjections = enumerate_rigid_surjections(m, k);
    let induced: Vec<Vec<usize>> = surjections.iter().map(|g| preimage_map(g, k)).collect();
    let certified = induced.iter().all(|f| is_embedding(f, &a, &b));
    let mut searched = embeddings(&a, &b);
    searched.sort();
    let mut sorted = induced.clone();
    sorted.sort();
    let round_trip = searched == sorted
        && surjections.iter().zip(&induced).all(|(g, f)| surjection_of(f, m, k) == *g)
        && searched.iter().all(|f| preimage_map(&surjection_of(f, m, k), k) == *f);
    Ok(BaCorrespondence { surjections, embeddings: induced, searched: searched.len(), certified, round_trip })
}
