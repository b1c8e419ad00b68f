//! Predimension `δ = 2n − m`, the classes C₀ and C_F, 2-orientations with
//! closure conditions, and the orders ≤_s and ≤_d.

use std::collections::BTreeSet;

use structures::Structure;
use thiserror::Error;

/// Default vertex bound for exhaustive subset scans.
pub const DEFAULT_BOUND: usize = 12;
/// Logarithm base for C_F when none is given.
pub const DEFAULT_LOG_BASE: f64 = std::f64::consts::E;
/// Edge bound for the exhaustive d-closed orientation scan.
pub const MAX_ENUMERATED_EDGES: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrientError {
    #[error("{0} vertices exceed the exhaustive bound {1}")]
    BoundExceeded(usize, usize),
    #[error("not a simple graph: {0}")]
    NotSimple(String),
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
}

/// Undirected edges `(u, v)`, `u < v`, of a structure with a symmetric loop-free binary `E`.
pub fn simple_edges(g: &Structure) -> Result<Vec<(usize, usize)>, OrientError> {
    let lang = g.language();
    let e = lang.rel_index("E").ok_or_else(|| OrientError::NotSimple("no relation E".into()))?;
    if lang.rel(e).arity != 2 {
        return Err(OrientError::NotSimple("E must be binary".into()));
    }
    let mut out = Vec::new();
    for t in g.tuples(e) {
        let (u, v) = (t[0], t[1]);
        if u == v {
            return Err(OrientError::NotSimple(format!("loop at {u}")));
        }
        if !g.has_tuple(e, &[v, u]) {
            return Err(OrientError::NotSimple(format!("edge {u},{v} is not symmetric")));
        }
        if u < v {
            out.push((u, v));
        }
    }
    Ok(out)
}

pub fn predimension(g: &Structure) -> Result<i64, OrientError> {
    Ok(2 * g.size() as i64 - simple_edges(g)?.len() as i64)
}

fn delta_of(mask: u64, edges: &[(usize, usize)]) -> i64 {
    let m = edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count() as i64;
    2 * mask.count_ones() as i64 - m
}

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Non-empty vertex sets by size, then lexicographically.
fn subsets_in_order(n: usize) -> Vec<u64> {
    let mut all: Vec<u64> = (1..1u64 << n).collect();
    all.sort_by_key(|&m| (m.count_ones(), members(m, n)));
    all
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Class {
    C0,
    /// `δ(H) ≥ log_base |H|`.
    CF { base: f64 },
}

impl Class {
    pub fn cf() -> Class {
        Class::CF { base: DEFAULT_LOG_BASE }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Least violating vertex set (by size, then lexicographically).
    pub violation: Option<Vec<usize>>,
}

/// Minimising over induced subgraphs suffices: deleting edges only raises δ.
pub fn class_membership(g: &Structure, which: Class, bound: usize) -> Result<Membership, OrientError> {
    let edges = simple_edges(g)?;
    let n = g.size();
    if n > bound || n > 63 {
        return Err(OrientError::BoundExceeded(n, bound));
    }
    for mask in subsets_in_order(n) {
        let d = delta_of(mask, &edges) as f64;
        let ok = match which {
            Class::C0 => d >= 0.0,
            Class::CF { base } => d >= (mask.count_ones() as f64).log(base),
        };
        if !ok {
            return Ok(Membership { member: false, violation: Some(members(mask, n)) });
        }
    }
    Ok(Membership { member: true, violation: None })
}

/// Arcs `tail → head`; every edge of the underlying graph appears once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub size: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn out_degree(&self) -> Vec<usize> {
        let mut d = vec![0; self.size];
        for &(u, _) in &self.arcs {
            d[u] += 1;
        }
        d
    }

    /// Vertices of out-degree `d < 2` with multiplicity `2 − d`.
    pub fn roots(&self) -> Vec<(usize, usize)> {
        self.out_degree().into_iter().enumerate().filter(|&(_, d)| d < 2).map(|(v, d)| (v, 2 - d)).collect()
    }

    pub fn root_multiplicity(&self) -> i64 {
        self.roots().iter().map(|&(_, m)| m as i64).sum()
    }

    /// Roots reachable from `u` along arcs (including `u` itself when it is a root).
    pub fn roots_from(&self, u: usize) -> BTreeSet<usize> {
        let mut out = vec![Vec::new(); self.size];
        for &(a, b) in &self.arcs {
            out[a].push(b);
        }
        let deg = self.out_degree();
        let mut seen = vec![false; self.size];
        let mut stack = vec![u];
        let mut roots = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            if deg[x] < 2 {
                roots.insert(x);
            }
            stack.extend(&out[x]);
        }
        roots
    }

    pub fn is_two_orientation_of(&self, edges: &[(usize, usize)]) -> bool {
        let mut mine: Vec<(usize, usize)> = self.arcs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        mine.sort_unstable();
        let mut theirs = edges.to_vec();
        theirs.sort_unstable();
        mine == theirs && self.out_degree().iter().all(|&d| d <= 2)
    }

    pub fn is_successor_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.arcs.iter().all(|(a, b)| !set.contains(a) || set.contains(b))
    }

    pub fn is_successor_d_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.is_successor_closed(set)
            && (0..self.size).filter(|v| !set.contains(v)).all(|u| self.roots_from(u).iter().any(|r| !set.contains(r)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrientOptions {
    /// Set to keep successor-closed.
    pub closed: Option<BTreeSet<usize>>,
    /// Also require every outside vertex to reach an outside root.
    pub d_closed: bool,
    /// Arcs whose direction is prescribed.
    pub fixed: Vec<(usize, usize)>,
}

/// A 2-orientation by bipartite matching of edges into two slots per vertex.
/// Edges leaving the closed set are forced inwards; the d-closed condition is
/// checked on the matching result and otherwise by exhaustive enumeration.
pub fn find_2orientation(g: &Structure, opts: &OrientOptions) -> Result<Option<Orientation>, OrientError> {
    let edges = simple_edges(g)?;
    let n = g.size();
    for &(a, b) in &opts.fixed {
        if a >= n || b >= n {
            return Err(OrientError::OutOfRange(a.max(b)));
        }
    }
    let closed = opts.closed.clone().unwrap_or_default();
    if let Some(&v) = closed.iter().find(|&&v| v >= n) {
        return Err(OrientError::OutOfRange(v));
    }
    // Allowed tails for each edge.
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        let mut c: Vec<usize> = if let Some(&(t, _)) = opts.fixed.iter().find(|&&(a, b)| (a.min(b), a.max(b)) == (u, v)) {
            vec![t]
        } else {
            vec![u, v]
        };
        // A tail inside the closed set needs its head inside too.
        c.retain(|&t| {
            let h = if t == u { v } else { u };
            !closed.contains(&t) || closed.contains(&h)
        });
        choices.push(c);
    }
    let Some(tails) = match_edges(n, &choices) else { return Ok(None) };
    let orient = |tails: &[usize]| Orientation {
        size: n,
        arcs: edges.iter().zip(tails).map(|(&(u, v), &t)| if t == u { (u, v) } else { (v, u) }).collect(),
    };
    let first = orient(&tails);
    if !opts.d_closed || first.is_successor_d_closed(&closed) {
        return Ok(Some(first));
    }
    if edges.len() > MAX_ENUMERATED_EDGES {
        return Err(OrientError::BoundExceeded(edges.len(), MAX_ENUMERATED_EDGES));
    }
    let mut load = vec![0; n];
    let mut cur = Vec::with_capacity(edges.len());
    let mut found = None;
    enumerate(&choices, &mut load, &mut cur, &mut |t| {
        let o = orient(t);
        if o.is_successor_d_closed(&closed) {
            found = Some(o);
            true
        } else {
            false
        }
    });
    Ok(found)
}

fn enumerate(choices: &[Vec<usize>], load: &mut [usize], cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if cur.len() == choices.len() {
        return visit(cur);
    }
    for &t in &choices[cur.len()] {
        if load[t] == 2 {
            continue;
        }
        load[t] += 1;
        cur.push(t);
        let stop = enumerate(choices, load, cur, visit);
        cur.pop();
        load[t] -= 1;
        if stop {
            return true;
        }
    }
    false
}

/// Kuhn's augmenting paths; each vertex offers two slots.
fn match_edges(n: usize, choices: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut slot_owner: Vec<Option<usize>> = vec![None; 2 * n];
    let mut tail = vec![usize::MAX; choices.len()];
    fn augment(e: usize, choices: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>], tail: &mut [usize]) -> bool {
        for &t in &choices[e] {
            for s in [2 * t, 2 * t + 1] {
                if std::mem::replace(&mut seen[s], true) {
                    continue;
                }
                if owner[s].is_none_or(|f| augment(f, choices, seen, owner, tail)) {
                    owner[s] = Some(e);
                    tail[e] = t;
                    return true;
                }
            }
        }
        false
    }
    for e in 0..choices.len() {
        let mut seen = vec![false; 2 * n];
        if !augment(e, choices, &mut seen, &mut slot_owner, &mut tail) {
            return None;
        }
    }
    Some(tail)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubOrder {
    /// `δ(H) ≤ δ(G′)` for every subgraph `G′ ⊇ H`.
    LeqS,
    /// `δ(H) < δ(G′)` for every subgraph `G′ ⊋ H`.
    LeqD,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub holds: bool,
    /// Superset of least predimension (ties: by size, then lexicographically) when the order fails.
    pub witness: Option<Vec<usize>>,
}

/// Quantifies over induced supersets only: for a fixed vertex set the
/// induced subgraph has the least δ, and `G′` on the vertex set of `H` is `H`.
pub fn substructure_order(g: &Structure, h: &BTreeSet<usize>, which: SubOrder, bound: usize) -> Result<OrderReport, OrientError> {
    let edges = simple_edges(g)?;
    let n = g.size();
    if let Some(&v) = h.iter().find(|&&v| v >= n) {
        return Err(OrientError::OutOfRange(v));
    }
    if n > bound || n > 63 {
        return Err(OrientError::BoundExceeded(n, bound));
    }
    let hm: u64 = h.iter().fold(0, |m, &v| m | 1 << v);
    let base = delta_of(hm, &edges);
    let mut worst: Option<(i64, u64)> = None;
    for mask in subsets_in_order(n) {
        if mask & hm != hm || mask == hm {
            continue;
        }
        let d = delta_of(mask, &edges);
        let bad = match which {
            SubOrder::LeqS => d < base,
            SubOrder::LeqD => d <= base,
        };
        if bad && worst.is_none_or(|(w, _)| d < w) {
            worst = Some((d, mask));
        }
    }
    Ok(OrderReport { holds: worst.is_none(), witness: worst.map(|(_, m)| members(m, n)) })
}
