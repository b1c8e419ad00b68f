use structures::{automorphisms, Structure};

use crate::hypergraph::{abc_hypergraph, AbcHypergraph};
use crate::ArrowError;

/// What a coloring certifies against the hypergraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessProperty {
    /// No hyperedge is monochromatic (found by search).
    NoMonochromatic,
    /// No hyperedge is monochromatic, by the automorphism argument.
    Rigidity,
    /// Every hyperedge sees more than this many colors.
    EveryCopyExceeds(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringWitness {
    pub colors: usize,
    /// Color of each vertex (embedding of A) of the hypergraph.
    pub assignment: Vec<usize>,
    pub property: WitnessProperty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowResult {
    Holds,
    Fails(ColoringWitness),
}

impl ArrowResult {
    pub fn holds(&self) -> bool {
        matches!(self, ArrowResult::Holds)
    }
}

const NONE: usize = usize::MAX;

enum Trail {
    Assign(usize),
    Domain(usize, u64),
}

struct Engine<'h> {
    edges: &'h [Vec<usize>],
    incident: Vec<Vec<usize>>,
    r: usize,
    need: usize,
    color: Vec<usize>,
    domain: Vec<u64>,
    uncolored: Vec<usize>,
    distinct: Vec<usize>,
    counts: Vec<u32>,
    used: Vec<usize>,
    trail: Vec<Trail>,
}

impl<'h> Engine<'h> {
    fn new(n: usize, edges: &'h [Vec<usize>], r: usize, need: usize) -> Self {
        let mut incident = vec![Vec::new(); n];
        for (e, vs) in edges.iter().enumerate() {
            for &v in vs {
                incident[v].push(e);
            }
        }
        Engine {
            edges,
            incident,
            r,
            need,
            color: vec![NONE; n],
            domain: vec![if r == 64 { u64::MAX } else { (1u64 << r) - 1 }; n],
            uncolored: edges.iter().map(|e| e.len()).collect(),
            distinct: vec![0; edges.len()],
            counts: vec![0; edges.len() * r],
            used: vec![0; r],
            trail: Vec::new(),
        }
    }

    fn edge_mask(&self, e: usize) -> u64 {
        (0..self.r).filter(|&c| self.counts[e * self.r + c] > 0).fold(0, |m, c| m | 1 << c)
    }

    /// Assigns and propagates; `false` on a conflict (state must then be undone).
    fn assign(&mut self, v: usize, c: usize) -> bool {
        let mut queue = vec![(v, c)];
        while let Some((w, c)) = queue.pop() {
            if self.color[w] != NONE {
                if self.color[w] != c {
                    return false;
                }
                continue;
            }
            if self.domain[w] >> c & 1 == 0 {
                return false;
            }
            self.color[w] = c;
            self.used[c] += 1;
            self.trail.push(Trail::Assign(w));
            for &e in &self.incident[w] {
                self.uncolored[e] -= 1;
                let k = e * self.r + c;
                self.counts[k] += 1;
                if self.counts[k] == 1 {
                    self.distinct[e] += 1;
                }
            }
            for i in 0..self.incident[w].len() {
                let e = self.incident[w][i];
                let reach = self.distinct[e] + self.uncolored[e];
                if reach < self.need {
                    return false;
                }
                if reach == self.need && self.uncolored[e] > 0 {
                    let mask = self.edge_mask(e);
                    for &x in &self.edges[e] {
                        if self.color[x] != NONE {
                            continue;
                        }
                        let old = self.domain[x];
                        let new = old & !mask;
                        if new != old {
                            self.trail.push(Trail::Domain(x, old));
                            self.domain[x] = new;
                            if new == 0 {
                                return false;
                            }
                            if new.count_ones() == 1 {
                                queue.push((x, new.trailing_zeros() as usize));
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("above mark") {
                Trail::Assign(w) => {
                    let c = self.color[w];
                    for &e in &self.incident[w] {
                        self.uncolored[e] += 1;
                        let k = e * self.r + c;
                        self.counts[k] -= 1;
                        if self.counts[k] == 0 {
                            self.distinct[e] -= 1;
                        }
                    }
                    self.used[c] -= 1;
                    self.color[w] = NONE;
                }
                Trail::Domain(x, old) => self.domain[x] = old,
            }
        }
    }

    /// Colors may only be introduced in increasing order.
    fn limit(&self) -> usize {
        match (0..self.r).rev().find(|&c| self.used[c] > 0) {
            Some(m) => (m + 1).min(self.r - 1),
            None => 0,
        }
    }
}

/// Lexicographically least `r`-coloring of the vertices in which every
/// hyperedge receives at least `need` distinct colors, or `None`.
pub fn find_coloring(
    n: usize,
    edges: &[Vec<usize>],
    r: usize,
    need: usize,
    node_cap: u64,
) -> Result<Option<Vec<usize>>, ArrowError> {
    if r == 0 {
        return Err(ArrowError::NoColors);
    }
    if edges.iter().any(|e| e.len() < need) {
        return Ok(None);
    }
    // More colors than vertices never help; the domain is a 64-bit mask.
    let r = r.min(n.max(1)).min(64);
    // Components are independent, and the least coloring of the whole is the
    // least coloring of each component; searching them apart avoids
    // backtracking across unrelated parts.
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        for w in e.windows(2) {
            let (x, y) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let x = root(&mut parent, v);
        members[x].push(v);
    }
    let mut comp_edges: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    let mut local = vec![0; n];
    for m in &members {
        for (i, &v) in m.iter().enumerate() {
            local[v] = i;
        }
    }
    for e in edges {
        if let Some(&v) = e.first() {
            comp_edges[root(&mut parent, v)].push(e.iter().map(|&x| local[x]).collect());
        }
    }
    let mut color = vec![0; n];
    let mut nodes = 0u64;
    for (x, m) in members.iter().enumerate() {
        if comp_edges[x].is_empty() {
            continue;
        }
        match search(m.len(), &comp_edges[x], r, need, node_cap, &mut nodes)? {
            Some(c) => m.iter().zip(c).for_each(|(&v, c)| color[v] = c),
            None => return Ok(None),
        }
    }
    Ok(Some(color))
}

fn search(
    n: usize,
    edges: &[Vec<usize>],
    r: usize,
    need: usize,
    node_cap: u64,
    nodes: &mut u64,
) -> Result<Option<Vec<usize>>, ArrowError> {
    let mut eng = Engine::new(n, edges, r, need);
    let mut frames: Vec<(usize, usize, usize)> = Vec::new();
    let mut next = 0;
    loop {
        while next < n && eng.color[next] != NONE {
            next += 1;
        }
        if next == n {
            return Ok(Some(eng.color));
        }
        frames.push((next, 0, eng.trail.len()));
        // Try colors at the top frame, backtracking through exhausted frames.
        loop {
            let Some(&(v, start, mark)) = frames.last() else { return Ok(None) };
            eng.undo(mark);
            let limit = eng.limit();
            let mut placed = false;
            for c in start..=limit {
                if eng.domain[v] >> c & 1 == 0 {
                    continue;
                }
                *nodes += 1;
                if *nodes > node_cap {
                    return Err(ArrowError::SearchCapExceeded(node_cap));
                }
                if eng.assign(v, c) {
                    frames.last_mut().expect("non-empty").1 = c + 1;
                    placed = true;
                    break;
                }
                eng.undo(mark);
            }
            if placed {
                next = v + 1;
                break;
            }
            frames.pop();
        }
    }
}

/// The automorphism coloring: each embedding of A gets color 0 when it is the
/// least among its compositions with automorphisms of A, else 1. `None` when
/// A is rigid or does not embed into B.
pub fn rigidity_coloring(a: &Structure, h: &AbcHypergraph) -> Option<Vec<usize>> {
    let auts = automorphisms(a);
    if auts.len() < 2 || h.a_in_b.is_empty() {
        return None;
    }
    Some(
        h.vertices
            .iter()
            .map(|e| {
                let least = auts.iter().map(|s| s.iter().map(|&v| e[v]).collect::<Vec<_>>()).min().expect("identity");
                usize::from(least != *e)
            })
            .collect(),
    )
}

/// Decides `c ⟶ (b)^a_r`; a failing answer carries a replayable coloring.
pub fn check_arrow(a: &Structure, b: &Structure, c: &Structure, r: usize, node_cap: u64) -> Result<ArrowResult, ArrowError> {
    if r == 0 {
        return Err(ArrowError::NoColors);
    }
    let h = abc_hypergraph(a, b, c, node_cap)?;
    arrow_on(a, &h, r, node_cap)
}

pub(crate) fn arrow_on(a: &Structure, h: &AbcHypergraph, r: usize, node_cap: u64) -> Result<ArrowResult, ArrowError> {
    if r >= 2 {
        if let Some(assignment) = rigidity_coloring(a, h) {
            return Ok(ArrowResult::Fails(ColoringWitness { colors: r, assignment, property: WitnessProperty::Rigidity }));
        }
    }
    Ok(match find_coloring(h.vertices.len(), &h.hyperedges, r, 2, node_cap)? {
        Some(assignment) => {
            ArrowResult::Fails(ColoringWitness { colors: r, assignment, property: WitnessProperty::NoMonochromatic })
        }
        None => ArrowResult::Holds,
    })
}

/// Re-evaluates a witness against the hypergraph.
pub fn replay_witness(h: &AbcHypergraph, w: &ColoringWitness) -> bool {
    if w.assignment.len() != h.vertices.len() || w.assignment.iter().any(|&c| c >= w.colors) {
        return false;
    }
    let need = match w.property {
        WitnessProperty::NoMonochromatic | WitnessProperty::Rigidity => 2,
        WitnessProperty::EveryCopyExceeds(t) => t + 1,
    };
    h.hyperedges.iter().all(|e| {
        let mut seen: Vec<usize> = e.iter().map(|&v| w.assignment[v]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len() >= need
    })
}

/// Least `t` with `c ⟶ (b)^a_{r,t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree {
    /// `None` when B does not embed into C (no `t` works).
    pub degree: Option<usize>,
    /// A coloring in which every copy of B sees more than `degree - 1` colors.
    pub below: Option<ColoringWitness>,
    pub automorphisms_of_a: usize,
}

impl Degree {
    /// The degree counted on copies instead of embeddings of A.
    pub fn copy_degree(&self) -> Option<f64> {
        self.degree.map(|t| t as f64 / self.automorphisms_of_a as f64)
    }
}

pub fn ramsey_degree_in(a: &Structure, b: &Structure, c: &Structure, r: usize, node_cap: u64) -> Result<Degree, ArrowError> {
    if r == 0 {
        return Err(ArrowError::NoColors);
    }
    let h = abc_hypergraph(a, b, c, node_cap)?;
    let automorphisms_of_a = automorphisms(a).len();
    if h.hyperedges.is_empty() {
        return Ok(Degree { degree: None, below: None, automorphisms_of_a });
    }
    let smallest = h.hyperedges.iter().map(|e| e.len()).min().unwrap_or(0);
    let mut below = None;
    let mut t = 1;
    loop {
        if t >= smallest || t >= r {
            break;
        }
        match find_coloring(h.vertices.len(), &h.hyperedges, r, t + 1, node_cap)? {
            Some(assignment) => {
                below = Some(ColoringWitness { colors: r, assignment, property: WitnessProperty::EveryCopyExceeds(t) });
                t += 1;
            }
            None => break,
        }
    }
    Ok(Degree { degree: Some(t), below, automorphisms_of_a })
}
