use std::collections::{BTreeMap, HashMap};

use structures::{MapSearch, SearchKind, Structure};

use crate::ArrowError;

/// Vertices are the embeddings of A into C; each hyperedge is the set of
/// those factoring through one embedding of B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcHypergraph {
    /// Embeddings of A into C in lexicographic order.
    pub vertices: Vec<Vec<usize>>,
    /// Distinct hyperedges as sorted vertex indices, in lexicographic order.
    pub hyperedges: Vec<Vec<usize>>,
    /// Number of embeddings of B producing each hyperedge.
    pub multiplicity: Vec<usize>,
    /// The least embedding of B producing each hyperedge.
    pub copies: Vec<Vec<usize>>,
    /// Embeddings of A into B.
    pub a_in_b: Vec<Vec<usize>>,
}

pub fn abc_hypergraph(a: &Structure, b: &Structure, c: &Structure, node_cap: u64) -> Result<AbcHypergraph, ArrowError> {
    if a.language() != b.language() || b.language() != c.language() {
        return Err(ArrowError::LanguageMismatch);
    }
    let vertices = MapSearch::new(a, c, SearchKind::Embedding).node_cap(node_cap).collect()?;
    let a_in_b = MapSearch::new(a, b, SearchKind::Embedding).node_cap(node_cap).collect()?;
    let index: HashMap<&[usize], usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut edges: BTreeMap<Vec<usize>, (usize, Vec<usize>)> = BTreeMap::new();
    MapSearch::new(b, c, SearchKind::Embedding).node_cap(node_cap).for_each(|e| {
        let mut set: Vec<usize> = a_in_b
            .iter()
            .map(|f| {
                let g: Vec<usize> = f.iter().map(|&v| e[v]).collect();
                index[g.as_slice()]
            })
            .collect();
        set.sort_unstable();
        set.dedup();
        edges.entry(set).or_insert_with(|| (0, e.to_vec())).0 += 1;
        true
    })?;
    let mut hyperedges = Vec::with_capacity(edges.len());
    let mut multiplicity = Vec::with_capacity(edges.len());
    let mut copies = Vec::with_capacity(edges.len());
    for (set, (m, e)) in edges {
        hyperedges.push(set);
        multiplicity.push(m);
        copies.push(e);
    }
    Ok(AbcHypergraph { vertices, hyperedges, multiplicity, copies, a_in_b })
}
