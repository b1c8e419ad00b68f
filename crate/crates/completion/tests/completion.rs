use completion::boolean::{ordered_boolean_algebra, MAX_ATOMS};
use completion::*;
use structures::build::graph;
use structures::maps::{classify_map, is_embedding, is_homomorphism_embedding};
use structures::{Language, MapKind, Structure, ORDER};

fn q(x: i64) -> Q {
    Q::from_integer(x)
}

#[test]
fn metric_path_completion() {
    let g = EdgeLabelledGraph::with_labels(3, &[(0, 1, 1), (1, 2, 3)]);
    let MetricOutcome::Completed(c) = complete_metric(&g) else { panic!("metric") };
    assert_eq!(c.get(0, 2), Some(q(3)));
    assert!(c.is_metric_space());
}

#[test]
fn metric_cap_applies() {
    // Disconnected pair gets the largest label.
    let g = EdgeLabelledGraph::with_labels(4, &[(0, 1, 1), (2, 3, 2)]);
    let MetricOutcome::Completed(c) = complete_metric(&g) else { panic!() };
    assert_eq!(c.get(0, 2), Some(q(2)));
    assert_eq!(c.get(1, 3), Some(q(2)));
}

#[test]
fn metric_triangle_witness() {
    let g = EdgeLabelledGraph::with_labels(3, &[(0, 1, 3), (1, 2, 1), (0, 2, 1)]);
    let MetricOutcome::NonMetric(w) = complete_metric(&g) else { panic!("3 > 1 + 1") };
    assert_eq!(w.cycle, vec![0, 1, 2]);
    assert_eq!(w.labels, vec![q(3), q(1), q(1)]);
    assert!(w.verify(&g));
}

#[test]
fn metric_shortest_witness_preferred() {
    // A long 4-cycle violation and a triangle violation: the triangle wins.
    let g = EdgeLabelledGraph::with_labels(5, &[(0, 1, 3), (1, 2, 1), (2, 3, 1), (0, 3, 1), (3, 4, 3), (2, 4, 1)]);
    let MetricOutcome::NonMetric(w) = complete_metric(&g) else { panic!() };
    assert_eq!(w.cycle.len(), 3);
    assert!(w.verify(&g));
}

#[test]
fn metric_rationals() {
    let mut g = EdgeLabelledGraph::new(3);
    g.set(0, 1, Q::new(1, 2));
    g.set(1, 2, Q::new(1, 3));
    let MetricOutcome::Completed(c) = complete_metric(&g) else { panic!() };
    // Capped by the largest label 1/2, below the path length 5/6.
    assert_eq!(c.get(0, 2), Some(Q::new(1, 2)));
    let s = g.to_structure(None);
    assert_eq!(s.language().rel(0).name, "d_1_3");
    assert_eq!(EdgeLabelledGraph::from_structure(&s).unwrap(), g);
}

#[test]
fn metric_structure_errors() {
    let lang = Language::build(&[("d_1_1", 2)], &[]).unwrap();
    let mut s = Structure::new(lang, 2);
    s.add_tuple(0, vec![0, 1]).unwrap();
    assert_eq!(EdgeLabelledGraph::from_structure(&s), Err(CompletionError::Asymmetric(0, 1)));
    let bad = Structure::new(Language::build(&[("E", 2)], &[]).unwrap(), 2);
    assert!(matches!(EdgeLabelledGraph::from_structure(&bad), Err(CompletionError::BadLabel(_))));
}

#[test]
fn metric_exhaustive_small() {
    // Labels 0 = absent, 1..3; all graphs on 4 vertices.
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    for code in 0..4usize.pow(6) {
        let mut g = EdgeLabelledGraph::new(4);
        let mut c = code;
        for &(u, v) in &pairs {
            if c % 4 > 0 {
                g.set(u, v, q((c % 4) as i64));
            }
            c /= 4;
        }
        let cycles = non_metric_cycles(&g, 4);
        match complete_metric(&g) {
            MetricOutcome::Completed(m) => {
                assert!(cycles.is_empty(), "{g:?}");
                assert!(m.is_metric_space());
                assert!(g.labels.iter().all(|(&(u, v), &d)| m.get(u, v) == Some(d)));
            }
            MetricOutcome::NonMetric(w) => {
                assert!(w.verify(&g));
                assert!(cycles.iter().all(|c| c.cycle.len() >= w.cycle.len()));
            }
        }
    }
}

fn en_graph(n: usize, e: &[(usize, usize)], nn: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(Language::build(&[("E", 2), ("N", 2)], &[]).unwrap(), n);
    for &(u, v) in e {
        s.add_tuple(0, vec![u, v]).unwrap();
        s.add_tuple(0, vec![v, u]).unwrap();
    }
    for &(u, v) in nn {
        s.add_tuple(1, vec![u, v]).unwrap();
        s.add_tuple(1, vec![v, u]).unwrap();
    }
    s
}

#[test]
fn equivalence_examples() {
    let EquivalenceOutcome::Completed(c) = complete_equivalence(&en_graph(3, &[(0, 1), (1, 2)], &[])).unwrap() else {
        panic!()
    };
    assert!(c.has_tuple(0, &[0, 2]));

    let out = complete_equivalence(&en_graph(3, &[(0, 1), (1, 2)], &[(0, 2)])).unwrap();
    assert_eq!(out, EquivalenceOutcome::Conflict { n_pair: (0, 2), path: vec![0, 1, 2] });

    let EquivalenceOutcome::Completed(c) = complete_equivalence(&en_graph(4, &[(0, 1), (2, 3)], &[])).unwrap() else {
        panic!()
    };
    for (u, v) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        assert!(c.has_tuple(1, &[u, v]) && !c.has_tuple(0, &[u, v]));
    }
}

#[test]
fn imaginaries_round_trip() {
    let k = en_graph(4, &[(0, 2)], &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let u = u_functor(&k).unwrap();
    assert_eq!(u.size(), 7);
    assert_eq!(t_functor(&u).unwrap(), k);

    // Convexly ordered version: classes {0, 1}, {2}, {3}.
    let lang = Language::build(&[(ORDER, 2), ("E", 2), ("N", 2)], &[]).unwrap();
    let mut s = Structure::new(lang, 4);
    for a in 0..4 {
        for b in a + 1..4 {
            s.add_tuple(0, vec![a, b]).unwrap();
            let r = if (a, b) == (0, 1) { 1 } else { 2 };
            s.add_tuple(r, vec![a, b]).unwrap();
            s.add_tuple(r, vec![b, a]).unwrap();
        }
    }
    let u = u_ordered(&s).unwrap();
    assert!(u.is_ordered());
    assert_eq!(t_ordered(&u).unwrap(), s);

    // Non-convex: classes {0, 2} and {1}.
    let mut bad = Structure::new(s.language().clone(), 3);
    for a in 0..3 {
        for b in a + 1..3 {
            bad.add_tuple(0, vec![a, b]).unwrap();
            let r = if (a, b) == (0, 2) { 1 } else { 2 };
            bad.add_tuple(r, vec![a, b]).unwrap();
            bad.add_tuple(r, vec![b, a]).unwrap();
        }
    }
    assert_eq!(u_ordered(&bad), Err(CompletionError::NotConvex));
}

fn order_structure(n: usize, lt: &[(usize, usize)], ll: &[(usize, usize)]) -> Structure {
    let mut s = Structure::new(Language::build(&[(ORDER, 2), (LL, 2)], &[]).unwrap(), n);
    for &(u, v) in lt {
        s.add_tuple(0, vec![u, v]).unwrap();
    }
    for &(u, v) in ll {
        s.add_tuple(1, vec![u, v]).unwrap();
    }
    s
}

#[test]
fn linear_order_examples() {
    let out = extend_linear_order(&order_structure(3, &[(0, 1)], &[])).unwrap().unwrap();
    assert!(out.is_ordered());
    assert!(out.has_tuple(0, &[1, 2]) && out.has_tuple(0, &[0, 2]));

    // Tie-break prefers the least free vertex: 2 < 0 forces 1 first.
    let out = extend_linear_order(&order_structure(3, &[(2, 0)], &[])).unwrap().unwrap();
    assert!(out.has_tuple(0, &[1, 2]) && out.has_tuple(0, &[2, 0]));

    let cyc = extend_linear_order(&order_structure(3, &[(0, 1), (1, 2), (2, 0)], &[])).unwrap();
    assert_eq!(cyc, Err(OrderWitness::Cycle(vec![0, 1, 2])));
    assert_eq!(extend_linear_order(&order_structure(2, &[(0, 1), (1, 0)], &[])).unwrap(), Err(OrderWitness::SymmetricPair(0, 1)));
    assert_eq!(extend_linear_order(&order_structure(2, &[(1, 1)], &[])).unwrap(), Err(OrderWitness::ReflexivePair(1)));

    let lin = order_structure(3, &[(0, 1), (0, 2), (1, 2)], &[(0, 2)]);
    assert_eq!(extend_linear_order(&lin).unwrap().unwrap(), lin);
    assert!(matches!(extend_linear_order(&graph(2, &[])), Err(CompletionError::MissingSymbol(_))));
}

#[test]
fn poset_examples() {
    let chain = order_structure(2, &[(0, 1)], &[(0, 1)]);
    assert_eq!(complete_poset_linext(&chain).unwrap().unwrap(), chain);

    let bad = order_structure(3, &[(2, 0)], &[(0, 1), (1, 2)]);
    assert_eq!(
        complete_poset_linext(&bad).unwrap(),
        Err(OrderWitness::InvariantViolation { clause: 2, pair: (0, 2) })
    );

    let flipped = order_structure(2, &[(1, 0)], &[(0, 1)]);
    assert_eq!(
        complete_poset_linext(&flipped).unwrap(),
        Err(OrderWitness::InvariantViolation { clause: 1, pair: (0, 1) })
    );

    let plain = order_structure(3, &[(0, 1)], &[]);
    assert_eq!(complete_poset_linext(&plain).unwrap(), extend_linear_order(&plain).unwrap());

    // Closure adds 0 ≪ 2 and the order follows it.
    let out = complete_poset_linext(&order_structure(3, &[], &[(0, 1), (1, 2)])).unwrap().unwrap();
    assert!(out.has_tuple(1, &[0, 2]));
    assert!(out.is_ordered());
}

fn c_structure(n: usize, triples: &[(usize, usize, usize)], order: Option<&[usize]>) -> Structure {
    let lang = if order.is_some() {
        Language::build(&[(ORDER, 2), ("C", 3)], &[]).unwrap()
    } else {
        Language::build(&[("C", 3)], &[]).unwrap()
    };
    let c = lang.rel_index("C").unwrap();
    let mut s = Structure::new(lang, n);
    for &(a, b, x) in triples {
        s.add_tuple(c, vec![a, b, x]).unwrap();
    }
    for a in 0..n {
        for b in 0..n {
            if a != b {
                s.add_tuple(c, vec![a, b, b]).unwrap();
            }
        }
    }
    if let Some(ord) = order {
        for i in 0..n {
            for j in i + 1..n {
                s.add_tuple(0, vec![ord[i], ord[j]]).unwrap();
            }
        }
    }
    s
}

#[test]
fn c_relations() {
    assert!(check_c_relation(&c_structure(2, &[], None)).unwrap().holds());

    let both = c_structure(3, &[(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0)], None);
    assert_eq!(check_c_relation(&both).unwrap().violation.unwrap().0, CAxiom::Asymmetry);

    let broken = c_structure(3, &[(0, 1, 2)], None);
    assert_eq!(check_c_relation(&broken).unwrap().violation.unwrap(), (CAxiom::Symmetry, vec![0, 1, 2]));

    // Leaves 0 | (1, 2).
    let tree = [(0, 1, 2), (0, 2, 1)];
    assert!(check_c_relation(&c_structure(3, &tree, Some(&[0, 1, 2]))).unwrap().holds());
    let r = check_c_relation(&c_structure(3, &tree, Some(&[1, 0, 2]))).unwrap();
    assert!(r.checked_convexity);
    assert_eq!(r.violation.unwrap(), (CAxiom::Convexity, vec![0, 1, 2]));

    let incomplete = c_structure(3, &[], None);
    assert_eq!(check_c_relation(&incomplete).unwrap().violation.unwrap().0, CAxiom::Totality);
}

#[test]
fn rigid_surjections() {
    assert_eq!(enumerate_rigid_surjections(2, 1), vec![vec![0, 0]]);
    assert_eq!(enumerate_rigid_surjections(3, 2), vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
    for m in 1..=5 {
        assert_eq!(enumerate_rigid_surjections(m, m), vec![(0..m).collect::<Vec<_>>()]);
    }
    // Stirling numbers of the second kind.
    assert_eq!(enumerate_rigid_surjections(5, 2).len(), 15);
    assert_eq!(enumerate_rigid_surjections(5, 3).len(), 25);
}

#[test]
fn boolean_algebras() {
    let b = ordered_boolean_algebra(2);
    assert!(b.is_ordered());
    for (m, k, count) in [(1, 1, 1), (2, 1, 1), (3, 2, 3), (2, 2, 1), (3, 1, 1), (3, 3, 1)] {
        let c = ba_embedding_correspondence(m, k).unwrap();
        assert!(c.holds(), "{m} {k}");
        assert_eq!(c.searched, count);
    }
    for m in 1..=MAX_ATOMS {
        for k in 1..=m {
            let c = ba_embedding_correspondence(m, k).unwrap();
            assert!(c.holds(), "{m} {k}");
        }
    }
    assert_eq!(ba_embedding_correspondence(5, 2), Err(CompletionError::TooLarge(5)));
}

#[test]
fn injectivize() {
    let e = graph(2, &[(0, 1)]);
    assert_eq!(injectivize_homomorphism_embedding(&e, &e, &[0, 1]).unwrap(), (e.clone(), vec![0, 1]));

    let (b, f) = injectivize_homomorphism_embedding(&graph(2, &[]), &graph(1, &[]), &[0, 0]).unwrap();
    assert_eq!(b, graph(2, &[]));
    assert_eq!(f, vec![0, 1]);

    let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let (b, f) = injectivize_homomorphism_embedding(&c4, &e, &[0, 1, 0, 1]).unwrap();
    assert_eq!(b.size(), 4);
    assert_eq!(classify_map(&f, &c4, &b, None), Some(MapKind::Isomorphism));
    assert!(is_homomorphism_embedding(&f, &c4, &b) && is_embedding(&f, &c4, &b));

    assert_eq!(
        injectivize_homomorphism_embedding(&graph(2, &[(0, 1)]), &graph(1, &[]), &[0, 0]),
        Err(CompletionError::NotHomomorphismEmbedding)
    );
}
