use std::collections::BTreeMap;

use crate::{Caps, PartiteError, PartiteSystem};

/// Vertex numbering of a power: partitions in predicate order, and inside a
/// partition the functions `N → B_p` in lexicographic order of their values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerLayout {
    pub exponent: usize,
    /// Vertices of each partition of the base system, increasing.
    pub parts: Vec<Vec<usize>>,
    pub offsets: Vec<usize>,
    /// Position of each base vertex inside its partition.
    pub position: Vec<usize>,
    pub size: usize,
}

impl PowerLayout {
    pub fn new(b: &PartiteSystem, exponent: usize) -> Option<Self> {
        let parts = b.partitions();
        let mut position = vec![0; b.size()];
        for part in &parts {
            for (i, &v) in part.iter().enumerate() {
                position[v] = i;
            }
        }
        let mut offsets = Vec::with_capacity(parts.len());
        let mut size = 0usize;
        for part in &parts {
            offsets.push(size);
            size = size.checked_add(part.len().checked_pow(exponent as u32)?)?;
        }
        Some(PowerLayout { exponent, parts, offsets, position, size })
    }

    /// Vertex of partition `p` whose coordinates are the given base vertices.
    pub fn encode(&self, p: usize, coords: &[usize]) -> usize {
        let k = self.parts[p].len();
        self.offsets[p] + coords.iter().fold(0, |acc, &v| acc * k + self.position[v])
    }

    /// Partition and coordinates (as base vertices) of a power vertex.
    pub fn decode(&self, x: usize) -> (usize, Vec<usize>) {
        // The last partition starting at or before `x` is never empty.
        let p = self.offsets.partition_point(|&o| o <= x) - 1;
        let k = self.parts[p].len();
        let mut r = x - self.offsets[p];
        let mut coords = vec![0; self.exponent];
        for i in (0..self.exponent).rev() {
            coords[i] = self.parts[p][r % k];
            r /= k;
        }
        (p, coords)
    }

    pub fn projection(&self) -> Vec<usize> {
        let mut proj = Vec::with_capacity(self.size);
        for (p, part) in self.parts.iter().enumerate() {
            proj.extend(std::iter::repeat(p).take(part.len().pow(self.exponent as u32)));
        }
        proj
    }
}

/// Calls `visit` on every `n`-tuple of items from `items`, lexicographically.
pub(crate) fn for_each_tuple<T>(items: &[T], n: usize, mut visit: impl FnMut(&[&T])) {
    if items.is_empty() && n > 0 {
        return;
    }
    let mut idx = vec![0usize; n];
    loop {
        let cur: Vec<&T> = idx.iter().map(|&i| &items[i]).collect();
        visit(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < items.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// The `n`-th power: relations and functions hold coordinatewise.
pub fn power(b: &PartiteSystem, n: usize, caps: &Caps) -> Result<(PartiteSystem, PowerLayout), PartiteError> {
    let layout = PowerLayout::new(b, n).filter(|l| l.size <= caps.max_vertices).ok_or(PartiteError::SizeCapExceeded {
        what: "vertices",
        limit: caps.max_vertices as u64,
    })?;
    let s = &b.structure;
    let lang = s.language();
    let mut c = structures::Structure::new(lang.clone(), layout.size);
    let mut budget = caps.max_tuples as u64;
    let mut charge = |k: u64| -> Result<(), PartiteError> {
        budget = budget.checked_sub(k).ok_or(PartiteError::SizeCapExceeded { what: "tuples", limit: caps.max_tuples as u64 })?;
        Ok(())
    };
    for r in 0..lang.rel_count() {
        let mut groups: BTreeMap<Vec<usize>, Vec<&Vec<usize>>> = BTreeMap::new();
        for t in s.tuples(r) {
            groups.entry(t.iter().map(|&v| b.projection[v]).collect()).or_default().push(t);
        }
        for (pattern, ts) in groups {
            charge((ts.len() as u64).saturating_pow(n as u32))?;
            for_each_tuple(&ts, n, |choice| {
                let tuple: Vec<usize> = (0..pattern.len())
                    .map(|j| {
                        let coords: Vec<usize> = choice.iter().map(|t| t[j]).collect();
                        layout.encode(pattern[j], &coords)
                    })
                    .collect();
                c.add_tuple(r, tuple).expect("in range");
            });
        }
    }
    let parts = &layout.parts;
    for f in 0..lang.fun_count() {
        let mut groups: BTreeMap<Vec<usize>, Vec<(&Vec<usize>, &std::collections::BTreeSet<usize>)>> = BTreeMap::new();
        for (args, vals) in s.entries(f) {
            groups.entry(args.iter().map(|&v| b.projection[v]).collect()).or_default().push((args, vals));
        }
        for (pattern, es) in groups {
            charge((es.len() as u64).saturating_pow(n as u32))?;
            let mut failed = None;
            for_each_tuple(&es, n, |choice| {
                if failed.is_some() {
                    return;
                }
                let args: Vec<usize> = (0..pattern.len())
                    .map(|j| {
                        let coords: Vec<usize> = choice.iter().map(|e| e.0[j]).collect();
                        layout.encode(pattern[j], &coords)
                    })
                    .collect();
                let mut values = Vec::new();
                for (p, part) in parts.iter().enumerate() {
                    let per: Vec<Vec<usize>> =
                        choice.iter().map(|e| e.1.iter().copied().filter(|v| b.projection[*v] == p).collect()).collect();
                    if per.iter().any(|x| x.is_empty()) || part.is_empty() {
                        continue;
                    }
                    product(&per, |coords| values.push(layout.encode(p, coords)));
                }
                if let Err(e) = charge(values.len() as u64) {
                    failed = Some(e);
                    return;
                }
                c.add_values(f, args, &values).expect("in range");
            });
            if let Some(e) = failed {
                return Err(e);
            }
        }
    }
    let projection = layout.projection();
    Ok((PartiteSystem { structure: c, projection, predicates: b.predicates }, layout))
}

fn product(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    let n = choices.len();
    let mut idx = vec![0usize; n];
    loop {
        let cur: Vec<usize> = idx.iter().enumerate().map(|(i, &k)| choices[i][k]).collect();
        visit(&cur);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}
