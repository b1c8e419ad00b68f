use arrows::*;
use num_bigint::BigUint;
use structures::build::{graph, linear_order, ordered_graph};
use structures::Structure;

const CAP: u64 = DEFAULT_NODE_CAP;

fn ordered_complete(n: usize) -> Structure {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    ordered_graph(n, &edges)
}

#[test]
fn hypergraph_shapes() {
    let (a, b, c) = (ordered_complete(1), ordered_complete(2), ordered_complete(3));
    let h = abc_hypergraph(&a, &b, &c, CAP).unwrap();
    assert_eq!(h.vertices.len(), 3);
    assert_eq!(h.hyperedges, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);

    let h = abc_hypergraph(&a, &ordered_complete(4), &c, CAP).unwrap();
    assert!(h.hyperedges.is_empty());

    let h = abc_hypergraph(&b, &b, &c, CAP).unwrap();
    assert!(h.hyperedges.iter().all(|e| e.len() == 1));
}

#[test]
fn multiplicity_counts_embeddings() {
    // Unordered: every triangle copy arises from 6 embeddings of K3.
    let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let v = graph(1, &[]);
    let h = abc_hypergraph(&v, &k3, &k4, CAP).unwrap();
    assert_eq!(h.hyperedges.len(), 4);
    assert!(h.multiplicity.iter().all(|&m| m == 6));
}

#[test]
fn chains() {
    let (a, b) = (linear_order(1), linear_order(3));
    assert_eq!(check_arrow(&a, &b, &linear_order(5), 2, CAP).unwrap(), ArrowResult::Holds);
    match check_arrow(&a, &b, &linear_order(4), 2, CAP).unwrap() {
        ArrowResult::Fails(w) => {
            assert_eq!(w.assignment, vec![0, 0, 1, 1]);
            assert_eq!(w.property, WitnessProperty::NoMonochromatic);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn complete_graphs() {
    let (a, b) = (ordered_complete(2), ordered_complete(3));
    assert!(check_arrow(&a, &b, &ordered_complete(6), 2, CAP).unwrap().holds());
    let c = ordered_complete(5);
    let ArrowResult::Fails(w) = check_arrow(&a, &b, &c, 2, CAP).unwrap() else { panic!("K5 colors") };
    let h = abc_hypergraph(&a, &b, &c, CAP).unwrap();
    assert!(replay_witness(&h, &w));
    // Each color class is a 5-cycle.
    for color in 0..2 {
        let class: Vec<&Vec<usize>> = h.vertices.iter().zip(&w.assignment).filter(|(_, &x)| x == color).map(|(e, _)| e).collect();
        assert_eq!(class.len(), 5);
        let mut deg = [0; 5];
        for e in class {
            deg[e[0]] += 1;
            deg[e[1]] += 1;
        }
        assert_eq!(deg, [2; 5]);
    }
}

#[test]
fn rigidity_guard() {
    let a = graph(2, &[(0, 1)]);
    let b = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let c = graph(6, &(0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect::<Vec<_>>());
    let ArrowResult::Fails(w) = check_arrow(&a, &b, &c, 2, CAP).unwrap() else { panic!("edge is not rigid") };
    assert_eq!(w.property, WitnessProperty::Rigidity);
    let h = abc_hypergraph(&a, &b, &c, CAP).unwrap();
    assert!(replay_witness(&h, &w));
    for (e, &col) in h.vertices.iter().zip(&w.assignment) {
        assert_eq!(col, usize::from(e[0] > e[1]));
    }
    // One color cannot separate.
    assert!(check_arrow(&a, &b, &c, 1, CAP).unwrap().holds());
}

#[test]
fn degenerate_instances() {
    let (a, b) = (linear_order(1), linear_order(3));
    assert!(!check_arrow(&a, &b, &linear_order(2), 2, CAP).unwrap().holds());
    assert!(check_arrow(&b, &b, &linear_order(2), 1, CAP).is_ok());
    assert!(check_arrow(&b, &b, &linear_order(4), 3, CAP).unwrap().holds());
    assert_eq!(check_arrow(&a, &b, &linear_order(4), 0, CAP), Err(ArrowError::NoColors));
    assert_eq!(check_arrow(&a, &graph(1, &[]), &linear_order(4), 2, CAP), Err(ArrowError::LanguageMismatch));
    assert_eq!(
        check_arrow(&ordered_complete(2), &ordered_complete(3), &ordered_complete(6), 2, 10),
        Err(ArrowError::SearchCapExceeded(10))
    );
}

#[test]
fn degrees() {
    let (a, b) = (linear_order(1), linear_order(3));
    let d = ramsey_degree_in(&a, &b, &linear_order(4), 2, CAP).unwrap();
    assert_eq!(d.degree, Some(2));
    let w = d.below.unwrap();
    assert_eq!(w.property, WitnessProperty::EveryCopyExceeds(1));
    assert_eq!(ramsey_degree_in(&a, &b, &linear_order(5), 2, CAP).unwrap().degree, Some(1));
    assert_eq!(ramsey_degree_in(&b, &b, &linear_order(4), 3, CAP).unwrap().degree, Some(1));
    assert_eq!(ramsey_degree_in(&a, &b, &linear_order(2), 2, CAP).unwrap().degree, None);

    // An unordered edge has two embeddings into each of its copies.
    let e = graph(2, &[(0, 1)]);
    let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
    let d = ramsey_degree_in(&e, &e, &k3, 2, CAP).unwrap();
    assert_eq!(d.degree, Some(2));
    assert_eq!(d.automorphisms_of_a, 2);
    assert_eq!(d.copy_degree(), Some(1.0));
}

#[test]
fn three_colors_need_more() {
    // 1 -> (3)^1_3 on chains needs 7 points.
    let (a, b) = (linear_order(1), linear_order(3));
    assert!(!check_arrow(&a, &b, &linear_order(6), 3, CAP).unwrap().holds());
    assert!(check_arrow(&a, &b, &linear_order(7), 3, CAP).unwrap().holds());
}

#[test]
fn search_is_lex_least() {
    // Brute force over all 2-colorings of the 4-chain hypergraph.
    let (a, b, c) = (linear_order(1), linear_order(3), linear_order(4));
    let h = abc_hypergraph(&a, &b, &c, CAP).unwrap();
    let n = h.vertices.len();
    let good = |x: &[usize]| h.hyperedges.iter().all(|e| e.iter().any(|&v| x[v] != x[e[0]]));
    let least = (0..1u32 << n)
        .map(|m| (0..n).map(|i| (m >> (n - 1 - i) & 1) as usize).collect::<Vec<_>>())
        .find(|x| good(x));
    assert_eq!(find_coloring(n, &h.hyperedges, 2, 2, CAP).unwrap(), least);
}

#[test]
fn tangent() {
    let t: Vec<BigUint> = tangent_numbers(7);
    let want: [u64; 7] = [1, 2, 16, 272, 7936, 353792, 22368256];
    assert_eq!(t, want.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>());
    assert_eq!(rado_clique_degrees(2)[1], BigUint::from(4u32));
    assert!(tangent_numbers(30).last().unwrap().bits() > 64);
}

#[test]
fn types_tree() {
    let t = tree_of_types(&graph(4, &[]), 4);
    assert!(t.levels[..4].iter().all(|l| l.len() == 1));
    assert!(t.levels[4].is_empty());

    let t = tree_of_types(&graph(3, &[(0, 1), (1, 2)]), 2);
    assert_eq!(t.levels[0], vec![vec![0, 1, 2]]);
    assert_eq!(t.levels[1], vec![vec![1], vec![2]]);
    assert_eq!(t.parents[1], vec![Some(0), Some(0)]);
    assert_eq!(t.levels[2], vec![vec![2]]);
    assert_eq!(t.parents[2], vec![Some(1)]);
}
