use structures::build::graph_language;
use structures::maps::is_embedding;
use structures::Structure;

use crate::EppaError;

/// Oriented graph on `n` vertices with arcs `E(u, v)`.
pub fn tournament(n: usize, arcs: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(graph_language(), n);
    for &(u, v) in arcs {
        s.add_tuple(0, vec![u, v]).expect("vertex in range");
    }
    s
}

/// Checks the part assignment: at least two parts, no arcs inside a part,
/// exactly one arc between vertices of different parts.
pub fn is_npartite_tournament(s: &Structure, parts: &[usize]) -> Result<(), String> {
    let n = s.size();
    if parts.len() != n {
        return Err(format!("{} part labels for {} vertices", parts.len(), n));
    }
    if s.language().rel_count() != 1 || s.language().rel(0).arity != 2 || !s.is_relational() {
        return Err("language must be a single binary relation".into());
    }
    if parts.iter().max().map_or(0, |m| m + 1) < 2 {
        return Err("fewer than two parts".into());
    }
    for u in 0..n {
        for v in 0..n {
            let (uv, vu) = (s.has_tuple(0, &[u, v]), s.has_tuple(0, &[v, u]));
            if parts[u] == parts[v] && uv {
                return Err(format!("arc {u}->{v} inside a part"));
            }
            if u < v && parts[u] != parts[v] && uv == vu {
                return Err(format!("pair {u},{v} needs exactly one arc"));
            }
        }
    }
    Ok(())
}

/// The product witness and the embedding of the input into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TournamentWitness {
    /// Common part size after padding.
    pub part_size: usize,
    /// Position of each input vertex in the normalized numbering (parts
    /// consecutive, padding vertices last in each part).
    pub position: Vec<usize>,
    pub b: Structure,
    pub b_parts: Vec<usize>,
    /// Embedding of the input into `b`.
    pub psi: Vec<usize>,
}

/// Vertices of `b` are pairs `(x, χ)` with `χ: N(x) → Z2`, numbered
/// lexicographically by `x` then by `χ` read as a bit string over `N(x)` in
/// increasing order.
pub fn npartite_tournament_witness(a: &Structure, parts: &[usize]) -> Result<TournamentWitness, EppaError> {
    is_npartite_tournament(a, parts).map_err(EppaError::NotNPartiteTournament)?;
    let n_parts = parts.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_parts];
    for (v, &p) in parts.iter().enumerate() {
        members[p].push(v);
    }
    let m = members.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let k = n_parts * m;
    let mut position = vec![0; a.size()];
    for (p, vs) in members.iter().enumerate() {
        for (i, &v) in vs.iter().enumerate() {
            position[v] = p * m + i;
        }
    }
    let part_of = |x: usize| x / m;
    let width = k - m;
    // Bit of y in a χ over N(x): y's rank among N(x), most significant first.
    let bit = |x: usize, chi: usize, y: usize| {
        let rank = if part_of(y) < part_of(x) { y } else { y - m };
        chi >> (width - 1 - rank) & 1
    };
    let per = 1usize << width;
    let size = k * per;
    let mut b = Structure::new(graph_language(), size);
    for x in 0..k {
        for x2 in 0..k {
            if part_of(x) == part_of(x2) {
                continue;
            }
            for chi in 0..per {
                for chi2 in 0..per {
                    let s = bit(x, chi, x2) ^ bit(x2, chi2, x);
                    if (x > x2 && s == 1) || (x < x2 && s == 0) {
                        b.add_tuple(0, vec![x * per + chi, x2 * per + chi2]).expect("in range");
                    }
                }
            }
        }
    }
    let b_parts = (0..size).map(|v| part_of(v / per)).collect();
    // χ_x(y) = 1 iff y < x and x → y in the input.
    let mut inverse = vec![None; k];
    for (v, &x) in position.iter().enumerate() {
        inverse[x] = Some(v);
    }
    let psi: Vec<usize> = (0..a.size())
        .map(|v| {
            let x = position[v];
            let mut chi = 0;
            for y in 0..x {
                if part_of(y) == part_of(x) {
                    continue;
                }
                if let Some(w) = inverse[y] {
                    if a.has_tuple(0, &[v, w]) {
                        chi |= 1 << (width - 1 - if part_of(y) < part_of(x) { y } else { y - m });
                    }
                }
            }
            x * per + chi
        })
        .collect();
    debug_assert!(is_embedding(&psi, a, &b));
    Ok(TournamentWitness { part_size: m, position, b, b_parts, psi })
}
