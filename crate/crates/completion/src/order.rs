use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use structures::{Structure, ORDER};

use crate::CompletionError;

/// Name of the partial-order relation `≪` in poset structures.
pub const LL: &str = "ll";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderWitness {
    ReflexivePair(usize),
    SymmetricPair(usize, usize),
    /// Shortest, then lexicographically least, oriented cycle starting at its least vertex.
    Cycle(Vec<usize>),
    /// Invariant clause (1 or 2) failing at a pair.
    InvariantViolation { clause: u8, pair: (usize, usize) },
}

fn index(s: &Structure, name: &str) -> Result<usize, CompletionError> {
    let lang = s.language();
    let r = lang.rel_index(name).ok_or_else(|| CompletionError::MissingSymbol(name.into()))?;
    if lang.rel(r).arity != 2 {
        return Err(CompletionError::WrongArity(name.into()));
    }
    Ok(r)
}

fn linearize(n: usize, pairs: &BTreeSet<(usize, usize)>) -> Result<Vec<usize>, OrderWitness> {
    for &(u, v) in pairs {
        if u == v {
            return Err(OrderWitness::ReflexivePair(u));
        }
    }
    for &(u, v) in pairs {
        if u < v && pairs.contains(&(v, u)) {
            return Err(OrderWitness::SymmetricPair(u, v));
        }
    }
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0; n];
    for &(u, v) in pairs {
        out[u].push(v);
        indeg[v] += 1;
    }
    // Least available vertex first.
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                heap.push(Reverse(w));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    Err(OrderWitness::Cycle(least_cycle(n, &out).expect("topological sort stalled on a cycle")))
}

fn least_cycle(n: usize, out: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut adj: Vec<Vec<usize>> = out.to_vec();
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    fn walk(adj: &[Vec<usize>], start: usize, left: usize, path: &mut Vec<usize>) -> bool {
        let at = *path.last().unwrap();
        for &w in &adj[at] {
            if left == 1 {
                if w == start {
                    return true;
                }
                continue;
            }
            if w <= start || path.contains(&w) {
                continue;
            }
            path.push(w);
            if walk(adj, start, left - 1, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    for k in 2..=n {
        for s in 0..n {
            let mut path = vec![s];
            if walk(&adj, s, k, &mut path) {
                return Some(path);
            }
        }
    }
    None
}

fn with_order(s: &Structure, lt: usize, order: &[usize]) -> Structure {
    let mut out = s.clone();
    for t in s.tuples(lt).clone() {
        out.remove_tuple(lt, &t);
    }
    for (i, &u) in order.iter().enumerate() {
        for &v in &order[i + 1..] {
            out.add_tuple(lt, vec![u, v]).expect("in range");
        }
    }
    out
}

/// Extends `<` to a linear order (stable topological sort, least vertex
/// first), leaving all other content untouched.
pub fn extend_linear_order(s: &Structure) -> Result<Result<Structure, OrderWitness>, CompletionError> {
    let lt = index(s, ORDER)?;
    let pairs: BTreeSet<(usize, usize)> = s.tuples(lt).iter().map(|t| (t[0], t[1])).collect();
    Ok(linearize(s.size(), &pairs).map(|order| with_order(s, lt, &order)))
}

fn closure(n: usize, pairs: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(u, v) in pairs {
        reach[u][v] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| reach[i][j]).collect()
}

/// Replaces `≪` by its transitive closure and extends `<` to a linear order
/// containing it. Clause 1 fails at a `≪` pair ordered the other way by `<`;
/// clause 2 fails at a closure pair that `<` orders either way.
pub fn complete_poset_linext(s: &Structure) -> Result<Result<Structure, OrderWitness>, CompletionError> {
    let lt = index(s, ORDER)?;
    let ll = index(s, LL)?;
    let n = s.size();
    let less: BTreeSet<(usize, usize)> = s.tuples(lt).iter().map(|t| (t[0], t[1])).collect();
    let base: BTreeSet<(usize, usize)> = s.tuples(ll).iter().map(|t| (t[0], t[1])).collect();
    for &(u, v) in &base {
        if u != v && less.contains(&(v, u)) {
            return Ok(Err(OrderWitness::InvariantViolation { clause: 1, pair: (u, v) }));
        }
    }
    let closed = closure(n, &base);
    for &(u, v) in closed.difference(&base) {
        if u != v && (less.contains(&(u, v)) || less.contains(&(v, u))) {
            return Ok(Err(OrderWitness::InvariantViolation { clause: 2, pair: (u, v) }));
        }
    }
    let union: BTreeSet<(usize, usize)> = less.union(&closed).copied().collect();
    let order = match linearize(n, &union) {
        Ok(o) => o,
        Err(w) => return Ok(Err(w)),
    };
    let mut out = with_order(s, lt, &order);
    for &(u, v) in closed.difference(&base) {
        out.add_tuple(ll, vec![u, v]).expect("in range");
    }
    Ok(Ok(out))
}
