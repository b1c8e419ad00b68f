use structures::{Constraints, MapSearch, SearchError, SearchKind, Structure};

/// Automorphism search for structures whose relations all have arity at most
/// two: pairwise relation patterns are forward-checked on bitset domains and
/// the most constrained vertex is branched on first. Other structures fall
/// back to the generic lexicographic search.
pub(crate) fn automorphism_within(s: &Structure, allowed: &[Vec<usize>], node_cap: u64) -> Result<Option<Vec<usize>>, SearchError> {
    let lang = s.language();
    let binary = s.is_relational() && lang.rel_count() <= 32 && (0..lang.rel_count()).all(|r| lang.rel(r).arity <= 2);
    if !binary {
        let c = Constraints { domain: Some(allowed.to_vec()), u_closed: None };
        return MapSearch::new(s, s, SearchKind::Embedding).constraints(c).node_cap(node_cap).first();
    }
    let n = s.size();
    let words = n.div_ceil(64).max(1);
    let mut pat = vec![0u64; n * n];
    for r in 0..lang.rel_count() {
        for t in s.tuples(r) {
            match t.as_slice() {
                [u] => pat[u * n + u] |= 1 << (2 * r),
                [u, v] => {
                    pat[u * n + v] |= 1 << (2 * r);
                    pat[v * n + u] |= 1 << (2 * r + 1);
                }
                _ => unreachable!("arity checked"),
            }
        }
    }
    // Patterns are numbered densely; class[(x * kinds + p) * words..]: vertices y with pattern p towards x.
    let mut kinds: Vec<u64> = pat.clone();
    kinds.sort_unstable();
    kinds.dedup();
    let pid: Vec<usize> = pat.iter().map(|q| kinds.binary_search(q).expect("listed")).collect();
    let mut bits = vec![0u64; n * kinds.len() * words];
    for x in 0..n {
        for y in 0..n {
            bits[(x * kinds.len() + pid[y * n + x]) * words + y / 64] |= 1 << (y % 64);
        }
    }
    let class = Classes { kinds: kinds.len(), pid, bits };
    let mut dom = vec![0u64; n * words];
    for u in 0..n {
        for &x in &allowed[u] {
            if pat[u * n + u] == pat[x * n + x] {
                dom[u * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
    let mut image = vec![usize::MAX; n];
    let pins: Vec<(usize, usize)> = (0..n).filter(|&u| allowed[u].len() == 1).map(|u| (u, allowed[u][0])).collect();
    if !restrict(n, words, &pat, &pins, &mut dom) {
        return Ok(None);
    }
    let mut nodes = 0u64;
    let ok = dfs(n, words, &class, dom, &mut image, &mut nodes, node_cap)?;
    Ok(ok.then_some(image))
}

struct Classes {
    kinds: usize,
    pid: Vec<usize>,
    bits: Vec<u64>,
}

fn dfs(
    n: usize,
    words: usize,
    class: &Classes,
    dom: Vec<u64>,
    image: &mut [usize],
    nodes: &mut u64,
    cap: u64,
) -> Result<bool, SearchError> {
    let count = |u: usize| dom[u * words..(u + 1) * words].iter().map(|w| w.count_ones()).sum::<u32>();
    let Some(u) = (0..n).filter(|&u| image[u] == usize::MAX).min_by_key(|&u| count(u)) else { return Ok(true) };
    let bits: Vec<usize> = (0..n).filter(|&x| dom[u * words + x / 64] >> (x % 64) & 1 == 1).collect();
    for x in bits {
        *nodes += 1;
        if *nodes > cap {
            return Err(SearchError::CapExceeded(cap));
        }
        let mut next = dom.clone();
        let mut dead = false;
        for v in 0..n {
            if v == u || image[v] != usize::MAX {
                continue;
            }
            let at = (x * class.kinds + class.pid[v * n + u]) * words;
            let keep = &class.bits[at..at + words];
            let row = &mut next[v * words..(v + 1) * words];
            for (w, k) in row.iter_mut().zip(keep) {
                *w &= k;
            }
            row[x / 64] &= !(1 << (x % 64));
            if row.iter().all(|&w| w == 0) {
                dead = true;
                break;
            }
        }
        if dead {
            continue;
        }
        image[u] = x;
        if dfs(n, words, class, next, image, nodes, cap)? {
            return Ok(true);
        }
        image[u] = usize::MAX;
    }
    Ok(false)
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Colour refinement run jointly on a source copy (pins individualised at
/// their preimages) and a target copy (at their images). An automorphism
/// respecting the pins preserves the refined colours, so `u` may only map to
/// vertices of its colour. Colours are multiset hashes: collisions only merge
/// classes, which weakens the pruning but never removes a valid image.
/// Returns `false` when some domain becomes empty.
fn restrict(n: usize, words: usize, pat: &[u64], pins: &[(usize, usize)], dom: &mut [u64]) -> bool {
    let mut src: Vec<u64> = (0..n).map(|v| mix(pat[v * n + v])).collect();
    let mut tgt: Vec<u64> = (0..n).map(|v| mix(pat[v * n + v])).collect();
    for (i, &(u, x)) in pins.iter().enumerate() {
        src[u] = mix(src[u] ^ mix(i as u64 + 1));
        tgt[x] = mix(tgt[x] ^ mix(i as u64 + 1));
    }
    let classes = |a: &[u64], b: &[u64]| {
        let mut all: Vec<u64> = a.iter().chain(b).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let round = |c: &[u64]| -> Vec<u64> {
        (0..n)
            .map(|v| {
                let sig = (0..n).filter(|&w| w != v).fold(0u64, |acc, w| acc.wrapping_add(mix(pat[v * n + w] ^ mix(c[w]))));
                mix(c[v] ^ mix(sig))
            })
            .collect()
    };
    let mut k = classes(&src, &tgt);
    loop {
        let (s2, t2) = (round(&src), round(&tgt));
        let k2 = classes(&s2, &t2);
        src = s2;
        tgt = t2;
        if k2 <= k {
            break;
        }
        k = k2;
    }
    for u in 0..n {
        let row = &mut dom[u * words..(u + 1) * words];
        for x in 0..n {
            if tgt[x] != src[u] {
                row[x / 64] &= !(1 << (x % 64));
            }
        }
        if row.iter().all(|&w| w == 0) {
            return false;
        }
    }
    true
}
