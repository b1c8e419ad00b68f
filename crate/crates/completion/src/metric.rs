use std::collections::BTreeMap;

use num_rational::Ratio;
use structures::{Language, Structure};

use crate::CompletionError;

/// Exact distances.
pub type Q = Ratio<i64>;

/// Relation name carrying distance `q`: `d_<numerator>_<denominator>`.
pub fn label_name(q: Q) -> String {
    format!("d_{}_{}", q.numer(), q.denom())
}

fn parse_label(name: &str) -> Option<Q> {
    let rest = name.strip_prefix("d_")?;
    let (n, d) = rest.split_once('_')?;
    let (n, d): (i64, i64) = (n.parse().ok()?, d.parse().ok()?);
    (n > 0 && d > 0).then(|| Q::new(n, d))
}

/// Partial labelling of unordered vertex pairs by positive rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabelledGraph {
    pub size: usize,
    /// Keys `(u, v)` with `u < v`.
    pub labels: BTreeMap<(usize, usize), Q>,
}

impl EdgeLabelledGraph {
    pub fn new(size: usize) -> Self {
        EdgeLabelledGraph { size, labels: BTreeMap::new() }
    }

    pub fn with_labels(size: usize, labels: &[(usize, usize, i64)]) -> Self {
        let mut g = EdgeLabelledGraph::new(size);
        for &(u, v, d) in labels {
            g.set(u, v, Q::from_integer(d));
        }
        g
    }

    pub fn set(&mut self, u: usize, v: usize, q: Q) {
        assert!(u != v && u < self.size && v < self.size, "pair out of range");
        self.labels.insert((u.min(v), u.max(v)), q);
    }

    pub fn get(&self, u: usize, v: usize) -> Option<Q> {
        self.labels.get(&(u.min(v), u.max(v))).copied()
    }

    /// Labels in increasing order.
    pub fn alphabet(&self) -> Vec<Q> {
        let mut s: Vec<Q> = self.labels.values().copied().collect();
        s.sort();
        s.dedup();
        s
    }

    /// One symmetric binary relation per label of `alphabet` (or of the graph).
    pub fn to_structure(&self, alphabet: Option<&[Q]>) -> Structure {
        let labels = alphabet.map_or_else(|| self.alphabet(), <[Q]>::to_vec);
        let mut lang = Language::new();
        for &q in &labels {
            lang.add_relation(&label_name(q), 2).expect("distinct labels");
        }
        let mut s = Structure::new(lang, self.size);
        for (&(u, v), &q) in &self.labels {
            let r = labels.iter().position(|&x| x == q).expect("label in alphabet");
            s.add_tuple(r, vec![u, v]).expect("in range");
            s.add_tuple(r, vec![v, u]).expect("in range");
        }
        s
    }

    pub fn from_structure(s: &Structure) -> Result<Self, CompletionError> {
        let lang = s.language();
        if !s.is_relational() {
            return Err(CompletionError::NotRelational);
        }
        let mut g = EdgeLabelledGraph::new(s.size());
        for r in 0..lang.rel_count() {
            let sym = lang.rel(r);
            let q = parse_label(&sym.name).ok_or_else(|| CompletionError::BadLabel(sym.name.clone()))?;
            if sym.arity != 2 {
                return Err(CompletionError::WrongArity(sym.name.clone()));
            }
            for t in s.tuples(r) {
                let (u, v) = (t[0], t[1]);
                if u == v {
                    return Err(CompletionError::BadLabel(sym.name.clone()));
                }
                if !s.has_tuple(r, &[v, u]) {
                    return Err(CompletionError::Asymmetric(u, v));
                }
                match g.get(u, v) {
                    Some(p) if p != q => return Err(CompletionError::ConflictingLabels(u.min(v), u.max(v))),
                    _ => g.set(u, v, q),
                }
            }
        }
        Ok(g)
    }

    /// Complete, labelled everywhere, and every triangle satisfies the triangle inequality.
    pub fn is_metric_space(&self) -> bool {
        let n = self.size;
        let d = |u: usize, v: usize| self.get(u, v);
        (0..n).all(|u| (u + 1..n).all(|v| d(u, v).is_some()))
            && (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        x == y || y == z || x == z || d(x, z).unwrap() <= d(x, y).unwrap() + d(y, z).unwrap()
                    })
                })
            })
    }
}

/// Cycle `x_0 … x_{k-1}` with `labels[i]` on `x_i x_{i+1 mod k}` and
/// `labels[0]` exceeding the sum of the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMetricCycle {
    pub cycle: Vec<usize>,
    pub labels: Vec<Q>,
}

impl NonMetricCycle {
    pub fn verify(&self, g: &EdgeLabelledGraph) -> bool {
        let k = self.cycle.len();
        let mut seen = self.cycle.clone();
        seen.sort_unstable();
        seen.dedup();
        k >= 3
            && seen.len() == k
            && self.labels.len() == k
            && (0..k).all(|i| g.get(self.cycle[i], self.cycle[(i + 1) % k]) == Some(self.labels[i]))
            && self.labels[0] > self.labels[1..].iter().copied().sum::<Q>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricOutcome {
    Completed(EdgeLabelledGraph),
    NonMetric(NonMetricCycle),
}

/// Shortest-path completion capped by the largest label, or the shortest
/// (then lexicographically least) non-metric cycle.
pub fn complete_metric(g: &EdgeLabelledGraph) -> MetricOutcome {
    let n = g.size;
    let dist = shortest_paths(g);
    if g.labels.iter().all(|(&(u, v), &q)| dist[u][v] == Some(q)) {
        // Nothing labelled means nothing forces a scale; use 1.
        let cap = g.labels.values().copied().max().unwrap_or_else(|| Q::from_integer(1));
        let mut out = EdgeLabelledGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                out.set(u, v, dist[u][v].map_or(cap, |d| d.min(cap)));
            }
        }
        return MetricOutcome::Completed(out);
    }
    MetricOutcome::NonMetric(least_non_metric_cycle(g).expect("some label exceeds a path"))
}

fn shortest_paths(g: &EdgeLabelledGraph) -> Vec<Vec<Option<Q>>> {
    let n = g.size;
    let mut d = vec![vec![None; n]; n];
    for (&(u, v), &q) in &g.labels {
        d[u][v] = Some(q);
        d[v][u] = Some(q);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn neighbours(g: &EdgeLabelledGraph) -> Vec<Vec<(usize, Q)>> {
    let mut adj = vec![Vec::new(); g.size];
    for (&(u, v), &q) in &g.labels {
        adj[u].push((v, q));
        adj[v].push((u, q));
    }
    for a in &mut adj {
        a.sort();
    }
    adj
}

fn least_non_metric_cycle(g: &EdgeLabelledGraph) -> Option<NonMetricCycle> {
    let n = g.size;
    let adj = neighbours(g);
    for k in 2..n {
        for (&(u, v), &a0) in &g.labels {
            let mut path = vec![v];
            if dfs(&adj, u, a0, k, Q::from_integer(0), &mut path) {
                let mut cycle = vec![u];
                cycle.extend(&path[..path.len() - 1]);
                let labels = (0..cycle.len()).map(|i| g.get(cycle[i], cycle[(i + 1) % cycle.len()]).unwrap()).collect();
                return Some(NonMetricCycle { cycle, labels });
            }
        }
    }
    None
}

/// Simple path from the end of `path` to `goal` using exactly `left` more edges with total below `bound`.
fn dfs(adj: &[Vec<(usize, Q)>], goal: usize, bound: Q, left: usize, sum: Q, path: &mut Vec<usize>) -> bool {
    let at = *path.last().expect("non-empty");
    for &(w, q) in &adj[at] {
        let s = sum + q;
        if s >= bound {
            continue;
        }
        if left == 1 {
            if w == goal {
                path.push(w);
                return true;
            }
            continue;
        }
        if w == goal || path.contains(&w) {
            continue;
        }
        path.push(w);
        if dfs(adj, goal, bound, left - 1, s, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Every non-metric cycle of the graph up to `max_len` vertices, rotated so
/// the long edge comes first. Exhaustive; for small graphs.
pub fn non_metric_cycles(g: &EdgeLabelledGraph, max_len: usize) -> Vec<NonMetricCycle> {
    let adj = neighbours(g);
    let mut out = Vec::new();
    for (&(u, v), &a0) in &g.labels {
        for k in 2..max_len.min(g.size) {
            let mut all = Vec::new();
            collect_paths(&adj, u, k, &mut vec![v], &mut all);
            for p in all {
                let mut cycle = vec![u];
                cycle.extend(&p[..p.len() - 1]);
                let labels: Vec<Q> = (0..cycle.len()).map(|i| g.get(cycle[i], cycle[(i + 1) % cycle.len()]).unwrap()).collect();
                if a0 > labels[1..].iter().copied().sum::<Q>() {
                    out.push(NonMetricCycle { cycle, labels });
                }
            }
        }
    }
    out
}

fn collect_paths(adj: &[Vec<(usize, Q)>], goal: usize, left: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let at = *path.last().expect("non-empty");
    for &(w, _) in &adj[at] {
        if left == 1 {
            if w == goal {
                let mut p = path.clone();
                p.push(w);
                out.push(p);
            }
            continue;
        }
        if w == goal || path.contains(&w) {
            continue;
        }
        path.push(w);
        collect_paths(adj, goal, left - 1, path, out);
        path.pop();
    }
}
