use std::collections::VecDeque;

use structures::{Language, Structure, ORDER};

use crate::CompletionError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceOutcome {
    /// Complete `{E, N}` graph extending the input.
    Completed(Structure),
    /// An `N` pair and an `E` path joining its endpoints.
    Conflict { n_pair: (usize, usize), path: Vec<usize> },
}

fn en_indices(s: &Structure) -> Result<(usize, usize), CompletionError> {
    let lang = s.language();
    let get = |name: &str| -> Result<usize, CompletionError> {
        let r = lang.rel_index(name).ok_or_else(|| CompletionError::MissingSymbol(name.into()))?;
        if lang.rel(r).arity != 2 {
            return Err(CompletionError::WrongArity(name.into()));
        }
        Ok(r)
    };
    Ok((get("E")?, get("N")?))
}

/// Labels every pair `E` iff an `E` path joins it; fails when that contradicts an `N` label.
pub fn complete_equivalence(s: &Structure) -> Result<EquivalenceOutcome, CompletionError> {
    let (e, nr) = en_indices(s)?;
    let n = s.size();
    let mut adj = vec![Vec::new(); n];
    for t in s.tuples(e) {
        if t[0] != t[1] {
            adj[t[0]].push(t[1]);
            adj[t[1]].push(t[0]);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut comp = vec![usize::MAX; n];
    for v in 0..n {
        if comp[v] == usize::MAX {
            comp[v] = v;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = v;
                        stack.push(y);
                    }
                }
            }
        }
    }
    let mut conflicts: Vec<(usize, usize)> =
        s.tuples(nr).iter().filter(|t| t[0] != t[1] && comp[t[0]] == comp[t[1]]).map(|t| (t[0].min(t[1]), t[0].max(t[1]))).collect();
    conflicts.sort_unstable();
    if let Some(&(u, v)) = conflicts.first() {
        return Ok(EquivalenceOutcome::Conflict { n_pair: (u, v), path: bfs_path(&adj, u, v) });
    }
    let mut out = Structure::new(s.language().clone(), n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                out.add_tuple(if comp[u] == comp[v] { e } else { nr }, vec![u, v]).expect("in range");
            }
        }
    }
    // Other relations are carried over untouched.
    for r in (0..s.language().rel_count()).filter(|&r| r != e && r != nr) {
        for t in s.tuples(r) {
            out.add_tuple(r, t.clone()).expect("in range");
        }
    }
    Ok(EquivalenceOutcome::Completed(out))
}

fn bfs_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

/// Language of the imaginary-vertex encoding: `O`, `I` unary, `F` unary function.
pub fn imaginary_language(ordered: bool) -> Language {
    let mut lang = Language::new();
    if ordered {
        lang.add_relation(ORDER, 2).expect("fresh");
    }
    lang.add_relation("O", 1).expect("fresh");
    lang.add_relation("I", 1).expect("fresh");
    lang.add_function("F", 1).expect("fresh");
    lang
}

/// Equivalence classes of a complete `{E, N}` graph, ordered by least member.
fn classes(s: &Structure) -> Result<Vec<usize>, CompletionError> {
    let (e, nr) = en_indices(s)?;
    let n = s.size();
    let mut class = vec![usize::MAX; n];
    let mut count = 0;
    for u in 0..n {
        if class[u] != usize::MAX {
            continue;
        }
        class[u] = count;
        for v in u + 1..n {
            if s.has_tuple(e, &[u, v]) {
                class[v] = count;
            }
        }
        count += 1;
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let same = class[u] == class[v];
            if s.has_tuple(e, &[u, v]) != same || s.has_tuple(nr, &[u, v]) == same {
                return Err(CompletionError::NotInClass(format!("pair {u},{v} breaks the equivalence")));
            }
        }
    }
    Ok(class)
}

/// Originals `0..n`, then one imaginary vertex per class; `F` sends an original to its class.
pub fn u_functor(s: &Structure) -> Result<Structure, CompletionError> {
    build_u(s, false)
}

/// As [`u_functor`], ordering originals as in `s`, originals before
/// imaginaries, and classes by their (convex) position.
pub fn u_ordered(s: &Structure) -> Result<Structure, CompletionError> {
    build_u(s, true)
}

fn build_u(s: &Structure, ordered: bool) -> Result<Structure, CompletionError> {
    let class = classes(s)?;
    let n = s.size();
    let k = class.iter().max().map_or(0, |m| m + 1);
    let lang = imaginary_language(ordered);
    let mut out = Structure::new(lang.clone(), n + k);
    let (o, i, f) = (lang.rel_index("O").unwrap(), lang.rel_index("I").unwrap(), lang.fun_index("F").unwrap());
    for v in 0..n {
        out.add_tuple(o, vec![v]).expect("in range");
        out.add_values(f, vec![v], &[n + class[v]]).expect("in range");
    }
    for c in 0..k {
        out.add_tuple(i, vec![n + c]).expect("in range");
    }
    if ordered {
        let lt = s.language().order_index().ok_or_else(|| CompletionError::MissingSymbol(ORDER.into()))?;
        if !s.is_ordered() {
            return Err(CompletionError::NotInClass("order is not linear".into()));
        }
        // Convexity: whenever u < v < w with u, w in one class, v is too.
        let rank = |v: usize| (0..n).filter(|&u| s.has_tuple(lt, &[u, v])).count();
        let mut by_rank = vec![0; n];
        for v in 0..n {
            by_rank[rank(v)] = v;
        }
        let mut class_order: Vec<usize> = Vec::new();
        for &v in &by_rank {
            match class_order.last() {
                Some(&c) if c == class[v] => {}
                _ if class_order.contains(&class[v]) => return Err(CompletionError::NotConvex),
                _ => class_order.push(class[v]),
            }
        }
        let pos = |c: usize| class_order.iter().position(|&x| x == c).unwrap();
        let lto = lang.order_index().unwrap();
        for u in 0..n + k {
            for v in 0..n + k {
                let less = match (u < n, v < n) {
                    (true, true) => s.has_tuple(lt, &[u, v]),
                    (true, false) => true,
                    (false, true) => false,
                    (false, false) => pos(u - n) < pos(v - n),
                };
                if less {
                    out.add_tuple(lto, vec![u, v]).expect("in range");
                }
            }
        }
    }
    Ok(out)
}

/// Restricts to the originals, joining two by `E` iff they share a class.
pub fn t_functor(s: &Structure) -> Result<Structure, CompletionError> {
    build_t(s, false)
}

/// As [`t_functor`], keeping the order on originals.
pub fn t_ordered(s: &Structure) -> Result<Structure, CompletionError> {
    build_t(s, true)
}

fn build_t(s: &Structure, ordered: bool) -> Result<Structure, CompletionError> {
    let lang = s.language();
    let missing = |x: &str| CompletionError::MissingSymbol(x.into());
    let o = lang.rel_index("O").ok_or_else(|| missing("O"))?;
    let f = lang.fun_index("F").ok_or_else(|| missing("F"))?;
    let originals: Vec<usize> = (0..s.size()).filter(|&v| s.has_tuple(o, &[v])).collect();
    let mut out_lang = Language::new();
    if ordered {
        out_lang.add_relation(ORDER, 2).expect("fresh");
    }
    out_lang.add_relation("E", 2).expect("fresh");
    out_lang.add_relation("N", 2).expect("fresh");
    let mut out = Structure::new(out_lang.clone(), originals.len());
    let (e, nr) = (out_lang.rel_index("E").unwrap(), out_lang.rel_index("N").unwrap());
    for (i, &u) in originals.iter().enumerate() {
        if s.value(f, &[u]).len() != 1 {
            return Err(CompletionError::NotInClass(format!("original {u} needs exactly one class")));
        }
        for (j, &v) in originals.iter().enumerate() {
            if i != j {
                let same = s.value(f, &[u]) == s.value(f, &[v]);
                out.add_tuple(if same { e } else { nr }, vec![i, j]).expect("in range");
            }
        }
    }
    if ordered {
        let lt = lang.order_index().ok_or_else(|| missing(ORDER))?;
        let lto = out_lang.order_index().unwrap();
        for (i, &u) in originals.iter().enumerate() {
            for (j, &v) in originals.iter().enumerate() {
                if s.has_tuple(lt, &[u, v]) {
                    out.add_tuple(lto, vec![i, j]).expect("in range");
                }
            }
        }
    }
    Ok(out)
}
