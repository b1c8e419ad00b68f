use crate::structure::Structure;

/// Adjacency and incidence lists for fast local lookups in a structure.
pub struct Index {
    /// Gaifman neighbours (relation tuples and function entries), sorted, no self.
    pub neighbors: Vec<Vec<usize>>,
    /// Per vertex, `(relation, position in tuples[relation])` of incident tuples.
    pub incident: Vec<Vec<(usize, usize)>>,
    pub tuples: Vec<Vec<Vec<usize>>>,
}

impl Index {
    pub fn new(s: &Structure) -> Self {
        let n = s.size();
        let mut neighbors = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        let lang = s.language();
        let mut tuples = Vec::with_capacity(lang.rel_count());
        for r in 0..lang.rel_count() {
            let ts: Vec<Vec<usize>> = s.tuples(r).iter().cloned().collect();
            for (i, t) in ts.iter().enumerate() {
                let mut vs = t.clone();
                vs.sort_unstable();
                vs.dedup();
                for &v in &vs {
                    incident[v].push((r, i));
                }
            }
            tuples.push(ts);
        }
        for mut b in s.blocks() {
            b.sort_unstable();
            b.dedup();
            for &u in &b {
                for &v in &b {
                    if u != v {
                        neighbors[u].push(v);
                    }
                }
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
            nb.dedup();
        }
        Index { neighbors, incident, tuples }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }
}
