//! Gaifman graphs and irreducibility.

use std::collections::BTreeSet;

use crate::index::Index;
use crate::language::Language;
use crate::structure::Structure;

/// Above this size the exhaustive decomposition search is replaced by a
/// direct construction from a non-adjacent pair (relational) or refused.
pub const EXHAUSTIVE_LIMIT: usize = 16;

/// Symmetric loop-free graph over the single binary relation `E`.
pub fn gaifman_graph(s: &Structure) -> Structure {
    let lang = Language::build(&[("E", 2)], &[]).expect("static language");
    let mut g = Structure::new(lang, s.size());
    let idx = Index::new(s);
    for (u, nb) in idx.neighbors.iter().enumerate() {
        for &v in nb {
            g.add_tuple(0, vec![u, v]).expect("in range");
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// When reducible: closed proper `(X, Y)` with `X ∪ Y` everything and every
    /// tuple or function entry inside one side.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

fn bits(set: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| set >> i & 1 == 1).collect()
}

fn mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

fn closure_mask(s: &Structure, m: u64) -> u64 {
    let seed: BTreeSet<usize> = bits(m, s.size()).into_iter().collect();
    mask(&s.generated_closure(&seed).into_iter().collect::<Vec<_>>())
}

/// Smallest closed `Y` that together with `X` decomposes `s`, if proper.
fn partner(s: &Structure, blocks: &[u64], x: u64, full: u64) -> Option<u64> {
    let mut y = full & !x;
    for &b in blocks {
        if b & !x != 0 {
            y |= b;
        }
    }
    let y = closure_mask(s, y);
    (y != full).then_some(y)
}

pub fn is_irreducible(s: &Structure) -> Irreducibility {
    let n = s.size();
    if n <= 1 {
        return Irreducibility { irreducible: true, witness: None };
    }
    if s.is_relational() {
        let idx = Index::new(s);
        let pair = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).find(|&(u, v)| !idx.adjacent(u, v));
        let Some((_, v)) = pair else {
            return Irreducibility { irreducible: true, witness: None };
        };
        if n > EXHAUSTIVE_LIMIT {
            // X misses v, Y is v with its neighbours; the partner u of the
            // non-adjacent pair keeps Y proper.
            let x: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            let mut y: Vec<usize> = idx.neighbors[v].clone();
            y.push(v);
            y.sort_unstable();
            return Irreducibility { irreducible: false, witness: Some((x, y)) };
        }
    }
    assert!(n <= EXHAUSTIVE_LIMIT, "irreducibility search is exhaustive; structure too large");
    let full: u64 = (1u64 << n) - 1;
    let blocks: Vec<u64> = s.blocks().map(|b| mask(&b)).collect();
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for x in 1..full {
        if closure_mask(s, x) != x {
            continue;
        }
        if let Some(y) = partner(s, &blocks, x, full) {
            let (xs, ys) = (bits(x, n), bits(y, n));
            let (p, q) = if xs <= ys { (xs, ys) } else { (ys, xs) };
            let key = ((x & y).count_ones() as usize, p, q);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    match best {
        Some((_, p, q)) => Irreducibility { irreducible: false, witness: Some((p, q)) },
        None => Irreducibility { irreducible: true, witness: None },
    }
}

/// Maximal cliques of a graph given by sorted adjacency lists (Bron–Kerbosch with pivot).
pub fn maximal_cliques(neighbors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    fn rec(r: &mut Vec<usize>, p: BTreeSet<usize>, mut x: BTreeSet<usize>, nb: &[Vec<usize>], out: &mut Vec<Vec<usize>>) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
            return;
        }
        let pivot = p.iter().chain(x.iter()).copied().max_by_key(|&u| nb[u].iter().filter(|v| p.contains(v)).count());
        let pivot_nb: BTreeSet<usize> = pivot.map(|u| nb[u].iter().copied().collect()).unwrap_or_default();
        let cands: Vec<usize> = p.iter().copied().filter(|v| !pivot_nb.contains(v)).collect();
        let mut p = p;
        for v in cands {
            let nv: BTreeSet<usize> = nb[v].iter().copied().collect();
            r.push(v);
            rec(r, p.intersection(&nv).copied().collect(), x.intersection(&nv).copied().collect(), nb, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    let n = neighbors.len();
    // Run per connected component to keep the candidate sets small.
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            for &w in &neighbors[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        rec(&mut Vec::new(), comp.into_iter().collect(), BTreeSet::new(), neighbors, &mut out);
    }
    out.sort();
    out
}

/// All irreducible closed vertex sets (non-empty), sorted.
pub fn irreducible_sets(s: &Structure) -> Vec<Vec<usize>> {
    let n = s.size();
    if s.is_relational() {
        let idx = Index::new(s);
        let mut all = BTreeSet::new();
        for c in maximal_cliques(&idx.neighbors) {
            let k = c.len();
            assert!(k <= 20, "clique too large to expand");
            for m in 1u64..(1 << k) {
                all.insert(bits(m, k).into_iter().map(|i| c[i]).collect::<Vec<_>>());
            }
        }
        return all.into_iter().collect();
    }
    assert!(n <= EXHAUSTIVE_LIMIT, "irreducible set search is exhaustive; structure too large");
    let mut out = Vec::new();
    for m in 1u64..(1u64 << n) {
        if closure_mask(s, m) != m {
            continue;
        }
        let set: BTreeSet<usize> = bits(m, n).into_iter().collect();
        let (sub, _) = s.induced(&set).expect("closed");
        if is_irreducible(&sub).irreducible {
            out.push(set.into_iter().collect());
        }
    }
    out.sort();
    out
}

/// Inclusion-maximal irreducible closed vertex sets, sorted.
pub fn maximal_irreducible_sets(s: &Structure) -> Vec<Vec<usize>> {
    if s.is_relational() {
        return maximal_cliques(&Index::new(s).neighbors);
    }
    let all = irreducible_sets(s);
    let sets: Vec<BTreeSet<usize>> = all.iter().map(|v| v.iter().copied().collect()).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        if !sets.iter().enumerate().any(|(j, b)| i != j && a.is_subset(b) && a != b) {
            out.push(all[i].clone());
        }
    }
    out
}

/// Whether `set` is contained in some irreducible substructure of `s`.
pub fn lies_in_irreducible(s: &Structure, set: &[usize]) -> bool {
    if s.is_relational() {
        let idx = Index::new(s);
        return set.iter().all(|&u| set.iter().all(|&v| u == v || idx.adjacent(u, v)));
    }
    let want: BTreeSet<usize> = set.iter().copied().collect();
    if want.is_empty() {
        return true;
    }
    irreducible_sets(s).iter().any(|k| want.iter().all(|v| k.contains(v)))
}
