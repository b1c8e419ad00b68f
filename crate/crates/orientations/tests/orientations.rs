use std::collections::BTreeSet;

use amalgamation::{free_amalgam, AmalgamationProblem};
use orientations::*;
use structures::build::{complete_graph, graph};
use structures::Structure;

fn bowtie() -> Structure {
    graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
}

fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

#[test]
fn predimensions() {
    assert_eq!(predimension(&bowtie()).unwrap(), 4);
    assert_eq!(predimension(&complete_graph(5)).unwrap(), 0);
    assert_eq!(predimension(&complete_graph(6)).unwrap(), -3);
}

#[test]
fn classes() {
    assert!(class_membership(&bowtie(), Class::C0, DEFAULT_BOUND).unwrap().member);
    let k6 = class_membership(&complete_graph(6), Class::C0, DEFAULT_BOUND).unwrap();
    assert_eq!(k6.violation, Some((0..6).collect()));
    assert!(class_membership(&graph(1, &[]), Class::cf(), DEFAULT_BOUND).unwrap().member);
    // K5 has δ = 0 < ln 5.
    let k5 = class_membership(&complete_graph(5), Class::cf(), DEFAULT_BOUND).unwrap();
    assert!(!k5.member);
    // K4: δ = 2 ≥ ln 4 but K4 in base 1.1 fails.
    assert!(class_membership(&complete_graph(4), Class::cf(), DEFAULT_BOUND).unwrap().member);
    assert!(!class_membership(&complete_graph(4), Class::CF { base: 1.1 }, DEFAULT_BOUND).unwrap().member);
    assert_eq!(class_membership(&graph(13, &[]), Class::C0, DEFAULT_BOUND), Err(OrientError::BoundExceeded(13, 12)));
}

#[test]
fn orientations() {
    let k5 = complete_graph(5);
    let o = find_2orientation(&k5, &OrientOptions::default()).unwrap().unwrap();
    assert!(o.is_two_orientation_of(&simple_edges(&k5).unwrap()));
    assert!(o.out_degree().iter().all(|&d| d == 2));
    assert_eq!(o.root_multiplicity(), 0);

    assert_eq!(find_2orientation(&complete_graph(6), &OrientOptions::default()).unwrap(), None);

    let path = graph(3, &[(0, 1), (1, 2)]);
    let opts = OrientOptions { closed: Some(set(&[1])), ..Default::default() };
    let o = find_2orientation(&path, &opts).unwrap().unwrap();
    assert_eq!(o.arcs, vec![(0, 1), (2, 1)]);
    assert!(o.is_successor_closed(&set(&[1])));
}

#[test]
fn d_closed_orientations() {
    // Edge with H = {0}: the outside vertex 1 must reach an outside root.
    let e = graph(2, &[(0, 1)]);
    let opts = OrientOptions { closed: Some(set(&[0])), d_closed: true, ..Default::default() };
    let o = find_2orientation(&e, &opts).unwrap().unwrap();
    assert!(o.is_successor_d_closed(&set(&[0])));

    // In K5 every vertex has out-degree 2: no roots, so d-closure fails for a proper H.
    let opts = OrientOptions { closed: Some(set(&[0, 1])), d_closed: true, ..Default::default() };
    assert_eq!(find_2orientation(&complete_graph(5), &opts).unwrap(), None);
}

#[test]
fn substructure_orders() {
    let e = graph(2, &[(0, 1)]);
    for which in [SubOrder::LeqS, SubOrder::LeqD] {
        assert!(substructure_order(&e, &set(&[0, 1]), which, DEFAULT_BOUND).unwrap().holds);
    }
    assert!(substructure_order(&e, &set(&[0]), SubOrder::LeqD, DEFAULT_BOUND).unwrap().holds);
    let r = substructure_order(&complete_graph(5), &set(&[0, 1]), SubOrder::LeqS, DEFAULT_BOUND).unwrap();
    assert!(!r.holds);
    assert_eq!(r.witness, Some((0..5).collect()));
    // Adding a vertex with two edges keeps δ: ≤_s holds, ≤_d fails.
    let t = graph(3, &[(0, 1), (0, 2), (1, 2)]);
    assert!(substructure_order(&t, &set(&[0, 1]), SubOrder::LeqS, DEFAULT_BOUND).unwrap().holds);
    assert!(!substructure_order(&t, &set(&[0, 1]), SubOrder::LeqD, DEFAULT_BOUND).unwrap().holds);
}

#[test]
fn orientation_matches_c0_exhaustively() {
    for n in 0..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for mask in 0..1u32 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            let g = graph(n, &edges);
            let member = class_membership(&g, Class::C0, DEFAULT_BOUND).unwrap().member;
            let o = find_2orientation(&g, &OrientOptions::default()).unwrap();
            assert_eq!(member, o.is_some(), "{edges:?}");
            if let Some(o) = o {
                assert!(o.is_two_orientation_of(&edges));
                assert_eq!(o.root_multiplicity(), predimension(&g).unwrap());
            }
        }
    }
}

/// Orients both sides with the base successor-closed and agreeing on it,
/// then takes the union on the free amalgam.
fn oriented_amalgam(a: &Structure, b1: &Structure, b2: &Structure, f1: Vec<usize>, f2: Vec<usize>) -> Option<Structure> {
    let h1: BTreeSet<usize> = f1.iter().copied().collect();
    let h2: BTreeSet<usize> = f2.iter().copied().collect();
    let o1 = find_2orientation(b1, &OrientOptions { closed: Some(h1), ..Default::default() }).unwrap()?;
    let back: Vec<Option<usize>> = (0..b1.size()).map(|v| f1.iter().position(|&x| x == v)).collect();
    let fixed = o1
        .arcs
        .iter()
        .filter_map(|&(s, t)| Some((f2[back[s]?], f2[back[t]?])))
        .collect();
    let o2 = find_2orientation(b2, &OrientOptions { closed: Some(h2), fixed, ..Default::default() }).unwrap()?;
    let p = AmalgamationProblem::new(a.clone(), b1.clone(), b2.clone(), f1, f2).unwrap();
    let am = free_amalgam(&p);
    let mut arcs: BTreeSet<(usize, usize)> = o1.arcs.iter().map(|&(s, t)| (am.beta1[s], am.beta1[t])).collect();
    arcs.extend(o2.arcs.iter().map(|&(s, t)| (am.beta2[s], am.beta2[t])));
    let o = Orientation { size: am.structure.size(), arcs: arcs.into_iter().collect() };
    assert!(o.is_two_orientation_of(&simple_edges(&am.structure).unwrap()));
    Some(am.structure)
}

#[test]
fn free_amalgams_over_closed_bases() {
    let mut checked = 0;
    let small: Vec<Structure> = {
        let mut v = Vec::new();
        for n in 2..=4usize {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |w| (u, w))).collect();
            for mask in 0..1u32 << pairs.len() {
                let e: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
                v.push(graph(n, &e));
            }
        }
        v
    };
    // Base: the induced subgraph on {0, 1} of each side; amalgamate pairs sharing it.
    for b1 in &small {
        for b2 in &small {
            if b1.size() + b2.size() - 2 > 5 {
                continue;
            }
            let base = set(&[0, 1]);
            let (a1, _) = b1.induced(&base).unwrap();
            let (a2, _) = b2.induced(&base).unwrap();
            if a1 != a2 {
                continue;
            }
            let in_c0 = |g: &Structure| class_membership(g, Class::C0, DEFAULT_BOUND).unwrap().member;
            let leq = |g: &Structure| substructure_order(g, &base, SubOrder::LeqS, DEFAULT_BOUND).unwrap().holds;
            if !(in_c0(b1) && in_c0(b2) && leq(b1) && leq(b2)) {
                continue;
            }
            let c = oriented_amalgam(&a1, b1, b2, vec![0, 1], vec![0, 1]).expect("orientations exist");
            assert!(in_c0(&c));
            checked += 1;
        }
    }
    assert!(checked > 100);
}
