use structures::Structure;

/// Levels of 1-types: `levels[m]` partitions `m..n` by quantifier-free type
/// over `0..m`; `parents[m][j]` is the class of level `m-1` containing class `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeTree {
    pub levels: Vec<Vec<Vec<usize>>>,
    pub parents: Vec<Vec<Option<usize>>>,
}

/// Same type over `0..m`: fixing `0..m` and sending `u` to `v` is a partial isomorphism.
fn same_type(s: &Structure, m: usize, u: usize, v: usize) -> bool {
    let lang = s.language();
    let swap = |x: usize| if x == u { v } else { x };
    let back = |x: usize| if x == v { u } else { x };
    (0..lang.rel_count()).all(|r| {
        let over = |t: &Vec<usize>, w: usize| t.iter().all(|&x| x < m || x == w);
        s.tuples(r).iter().filter(|t| over(t, u)).all(|t| s.has_tuple(r, &t.iter().map(|&x| swap(x)).collect::<Vec<_>>()))
            && s.tuples(r)
                .iter()
                .filter(|t| over(t, v))
                .all(|t| s.has_tuple(r, &t.iter().map(|&x| back(x)).collect::<Vec<_>>()))
    })
}

/// Levels `0..=depth` of the tree of 1-types of a relational structure in its vertex order.
pub fn tree_of_types(s: &Structure, depth: usize) -> TypeTree {
    let n = s.size();
    let depth = depth.min(n);
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(depth + 1);
    let mut parents: Vec<Vec<Option<usize>>> = Vec::with_capacity(depth + 1);
    for m in 0..=depth {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in m..n {
            match classes.iter_mut().find(|c| same_type(s, m, c[0], v)) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        let up = classes
            .iter()
            .map(|c| if m == 0 { None } else { levels[m - 1].iter().position(|p: &Vec<usize>| p.contains(&c[0])) })
            .collect();
        levels.push(classes);
        parents.push(up);
    }
    TypeTree { levels, parents }
}
