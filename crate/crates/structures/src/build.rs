//! Builders for common structures.

use crate::language::{Language, ORDER};
use crate::structure::Structure;

pub fn graph_language() -> Language {
    Language::build(&[("E", 2)], &[]).expect("static language")
}

pub fn order_language() -> Language {
    Language::build(&[(ORDER, 2)], &[]).expect("static language")
}

pub fn ordered_graph_language() -> Language {
    Language::build(&[(ORDER, 2), ("E", 2)], &[]).expect("static language")
}

/// Undirected graph with symmetric `E`.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(graph_language(), n);
    for &(u, v) in edges {
        s.add_tuple(0, vec![u, v]).expect("vertex in range");
        s.add_tuple(0, vec![v, u]).expect("vertex in range");
    }
    s
}

pub fn complete_graph(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    graph(n, &edges)
}

/// The chain `0 < 1 < … < n-1`.
pub fn linear_order(n: usize) -> Structure {
    let mut s = Structure::new(order_language(), n);
    for u in 0..n {
        for v in u + 1..n {
            s.add_tuple(0, vec![u, v]).expect("vertex in range");
        }
    }
    s
}

/// Graph with the natural vertex order added.
pub fn ordered_graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(ordered_graph_language(), n);
    for u in 0..n {
        for v in u + 1..n {
            s.add_tuple(0, vec![u, v]).expect("vertex in range");
        }
    }
    for &(u, v) in edges {
        s.add_tuple(1, vec![u, v]).expect("vertex in range");
        s.add_tuple(1, vec![v, u]).expect("vertex in range");
    }
    s
}
