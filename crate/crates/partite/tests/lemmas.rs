use partite::*;
use structures::build::{graph, graph_language, ordered_graph};
use structures::maps::{classify_map, compose};
use structures::{isomorphism, Language, MapKind, Structure, SymRef, SymbolKind};

fn emb(f: &[usize], a: &Structure, b: &Structure) -> bool {
    matches!(classify_map(f, a, b, None), Some(MapKind::Embedding | MapKind::Isomorphism))
}

fn rel_lang() -> Language {
    Language::build(&[("R", 2)], &[]).unwrap()
}

#[test]
fn validation_reports() {
    let e = graph(2, &[(0, 1)]);
    let t = PartiteSystem::transversal(&e);
    let r = validate_partite(&t, Some(&e), None);
    assert!(r.is_valid() && r.transversal);

    let bad = PartiteSystem::new(e.clone(), vec![0, 0], 1);
    let r = validate_partite(&bad, None, None);
    assert!(matches!(r.issues[0], PartiteIssue::NotTransversal { .. }));
    assert!(!r.transversal);

    let lang = Language::build(&[], &[("F", 1)]).unwrap();
    let mut s = Structure::new(lang, 3);
    s.add_values(0, vec![0], &[1, 2]).unwrap();
    let sys = PartiteSystem::new(s, vec![0, 1, 1], 2);
    assert!(validate_partite(&sys, None, None).is_valid());
    let u = [SymRef { kind: SymbolKind::Function, index: 0 }];
    let r = validate_partite(&sys, None, Some(&u));
    assert_eq!(r.issues, vec![PartiteIssue::NotUTransversal { symbol: "F".into(), args: vec![0] }]);

    let out = PartiteSystem::new(e, vec![0, 2], 2);
    assert!(matches!(validate_partite(&out, None, None).issues[0], PartiteIssue::PredicateOutOfRange { .. }));
}

#[test]
fn power_sizes_and_identity() {
    let s = Structure::new(graph_language(), 3);
    let b = PartiteSystem::new(s, vec![0, 0, 1], 2);
    let (p, layout) = power(&b, 2, &Caps::default()).unwrap();
    let parts: Vec<usize> = p.partitions().iter().map(|x| x.len()).collect();
    assert_eq!(parts, vec![4, 1]);
    assert_eq!(layout.decode(3), (0, vec![1, 1]));
    assert_eq!(layout.encode(1, &[2, 2]), 4);

    let c = ordered_graph(3, &[(0, 2)]);
    let b = PartiteSystem::new(c.clone(), vec![0, 1, 2], 3);
    let (p, _) = power(&b, 1, &Caps::default()).unwrap();
    assert_eq!(p.structure, c);
    assert!(isomorphism(&p.structure, &c).is_some());
}

#[test]
fn power_relations_are_coordinatewise() {
    // Partition p = {0, 1}, q = {2, 3}; R is a proper subset of p × q.
    let mut s = Structure::new(rel_lang(), 4);
    for t in [[0, 2], [0, 3], [1, 2]] {
        s.add_tuple(0, t.to_vec()).unwrap();
    }
    for full in [false, true] {
        let mut s = s.clone();
        if full {
            s.add_tuple(0, vec![1, 3]).unwrap();
        }
        let b = PartiteSystem::new(s.clone(), vec![0, 0, 1, 1], 2);
        let (p, layout) = power(&b, 2, &Caps::default()).unwrap();
        let mut expected = 0;
        for x in 0..4 {
            for y in 4..8 {
                let (_, cx) = layout.decode(x);
                let (_, cy) = layout.decode(y);
                let holds = (0..2).all(|i| s.has_tuple(0, &[cx[i], cy[i]]));
                assert_eq!(holds, p.structure.has_tuple(0, &[x, y]));
                expected += holds as usize;
            }
        }
        assert_eq!(p.structure.tuple_count(), expected);
        assert_eq!(expected, if full { 16 } else { 9 });
        let mut d = Structure::new(rel_lang(), 2);
        d.add_tuple(0, vec![0, 1]).unwrap();
        assert!(validate_partite(&p, Some(&d), None).is_valid());
    }
}

#[test]
fn power_functions_are_coordinatewise() {
    let lang = Language::build(&[], &[("F", 1)]).unwrap();
    let mut s = Structure::new(lang, 4);
    s.add_values(0, vec![0], &[2]).unwrap();
    s.add_values(0, vec![1], &[2, 3]).unwrap();
    let b = PartiteSystem::new(s, vec![0, 0, 1, 1], 2);
    let (p, layout) = power(&b, 2, &Caps::default()).unwrap();
    // (1,1) ↦ all four of {2,3}², (0,1) ↦ {(2,2),(2,3)}.
    let x = layout.encode(0, &[1, 1]);
    assert_eq!(p.structure.value(0, &[x]).len(), 4);
    let x = layout.encode(0, &[0, 1]);
    let want: std::collections::BTreeSet<usize> = [layout.encode(1, &[2, 2]), layout.encode(1, &[2, 3])].into();
    assert_eq!(p.structure.value(0, &[x]), &want);
}

#[test]
fn power_cap() {
    let s = Structure::new(graph_language(), 10);
    let b = PartiteSystem::new(s, vec![0; 10], 1);
    let caps = Caps { max_vertices: 999, ..Caps::default() };
    assert!(matches!(power(&b, 3, &caps), Err(PartiteError::SizeCapExceeded { .. })));
    assert_eq!(power(&b, 2, &caps).unwrap().0.size(), 100);
}

fn check_witnesses(out: &PartiteLemmaOutput, a: &Structure, b: &Structure, u: Option<&[SymRef]>) {
    let w = &out.witnesses;
    let c = &out.system.structure;
    let want = if u.is_some() { MapKind::UClosedEmbedding } else { MapKind::Embedding };
    let ok = |k: Option<MapKind>| k == Some(want) || k == Some(MapKind::Isomorphism);
    for word in halesjewett::enumerate_words(w.sigma.len(), w.exponent()) {
        assert!(ok(classify_map(&w.e(&word), a, c, u)), "e_w {word:?}");
    }
    for pw in w.parameter_words() {
        let f = w.f(&pw);
        assert!(ok(classify_map(&f, b, c, u)), "f_W {pw}");
        for (l, phi) in w.sigma.iter().enumerate() {
            assert_eq!(compose(&f, phi), w.e(&pw.substitute(l, w.sigma.len()).unwrap()));
        }
    }
}

#[test]
fn partite_lemma_single_vertex() {
    let a = Structure::new(graph_language(), 1);
    let b = PartiteSystem::new(Structure::new(graph_language(), 2), vec![0, 0], 1);
    let out = partite_lemma(&PartiteSystem::transversal(&a), &b, 2, &Caps::default()).unwrap();
    assert_eq!(out.system.size(), 4);
    assert_eq!(halesjewett::enumerate_words(out.witnesses.sigma.len(), 2).len(), 4);
    assert_eq!(out.witnesses.parameter_words().len(), 5);
    assert_eq!(out.mode, Mode::Full);
    check_witnesses(&out, &a, &b.structure, None);
    assert_eq!(certify_ramsey(&out.witnesses), Some(true));
}

#[test]
fn partite_lemma_rigid_single_embedding() {
    let a = ordered_graph(2, &[(0, 1)]);
    let t = PartiteSystem::transversal(&a);
    let out = partite_lemma(&t, &t, 1, &Caps::default()).unwrap();
    assert_eq!(out.witnesses.sigma.len(), 1);
    assert_eq!(out.mode, Mode::Full);
    assert!(isomorphism(&out.system.structure, &a).is_some());
}

#[test]
fn partite_lemma_bipartite_graph_copies_are_induced() {
    let a = graph(2, &[(0, 1)]);
    let b = PartiteSystem::new(graph(4, &[(0, 2), (1, 2), (1, 3)]), vec![0, 0, 1, 1], 2);
    let out = partite_lemma(&PartiteSystem::transversal(&a), &b, 2, &Caps::default()).unwrap();
    assert_eq!(out.witnesses.sigma.len(), 3);
    assert_eq!(out.mode, Mode::Witness);
    check_witnesses(&out, &a, &b.structure, None);
    assert!(validate_partite(&out.system, None, None).is_valid());
}

#[test]
fn partite_lemma_errors() {
    let a = graph(2, &[(0, 1)]);
    let b = PartiteSystem::new(Structure::new(graph_language(), 2), vec![0, 1], 2);
    let t = PartiteSystem::transversal(&a);
    assert_eq!(partite_lemma(&t, &b, 1, &Caps::default()), Err(PartiteError::EmptyAlphabet));
    let bad = PartiteSystem::new(a.clone(), vec![0, 0], 2);
    assert!(matches!(partite_lemma(&bad, &b, 1, &Caps::default()), Err(PartiteError::InvalidInput(_))));
}

#[test]
fn induced_lemma_coordinate_copies() {
    let a = ordered_graph(2, &[(0, 1)]);
    let mut s = Structure::new(a.language().clone(), 4);
    s.add_tuple(0, vec![0, 2]).unwrap();
    s.add_tuple(0, vec![1, 3]).unwrap();
    s.add_tuple(1, vec![0, 2]).unwrap();
    s.add_tuple(1, vec![2, 0]).unwrap();
    s.add_tuple(1, vec![1, 3]).unwrap();
    s.add_tuple(1, vec![3, 1]).unwrap();
    let b = PartiteSystem::new(s, vec![0, 1, 0, 1], 2);
    // Vertices 0,2 sit over 0 and 1,3 over 1: the edges {0,2},{1,3} are not transversal.
    assert!(!validate_partite(&b, Some(&a), None).is_valid());
    let b = PartiteSystem::new(b.structure, vec![0, 0, 1, 1], 2);
    assert!(validate_partite(&b, Some(&a), None).is_valid());
    let one = induced_partite_lemma(&a, &b, 1, None, &Caps::default()).unwrap();
    assert_eq!(one.system.structure, b.structure);
    let f: Vec<Vec<usize>> = one.witnesses.parameter_words().iter().map(|w| one.witnesses.f(w)).collect();
    assert_eq!(f, vec![vec![0, 1, 2, 3]]);
    let words: Vec<Vec<usize>> = (0..2).map(|l| one.witnesses.e(&[l])).collect();
    assert_eq!(words, vec![vec![0, 2], vec![1, 3]]);

    let two = induced_partite_lemma(&a, &b, 2, None, &Caps::default()).unwrap();
    assert_eq!(two.system.size(), 8);
    assert_eq!(two.mode, Mode::Full);
    check_witnesses(&two, &a, &b.structure, None);
    assert!(validate_partite(&two.system, Some(&a), None).is_valid());
}

#[test]
fn induced_lemma_closed_variant() {
    let a = {
        let mut s = Structure::new(rel_lang(), 2);
        s.add_tuple(0, vec![0, 1]).unwrap();
        s
    };
    let mut s = Structure::new(rel_lang(), 4);
    s.add_tuple(0, vec![0, 2]).unwrap();
    s.add_tuple(0, vec![1, 3]).unwrap();
    let b = PartiteSystem::new(s, vec![0, 0, 1, 1], 2);
    let u = [SymRef { kind: SymbolKind::Relation, index: 0 }];
    assert!(validate_partite(&b, Some(&a), Some(&u)).is_valid());
    let out = induced_partite_lemma(&a, &b, 2, Some(&u), &Caps::default()).unwrap();
    assert_eq!(out.witnesses.sigma.len(), 2);
    check_witnesses(&out, &a, &b.structure, Some(&u));
    assert!(validate_partite(&out.system, Some(&a), Some(&u)).is_valid());
}

fn edge_copies_over_triangle() -> (Structure, Structure, PartiteSystem) {
    let d = graph(3, &[(0, 1), (0, 2), (1, 2)]);
    let b = graph(6, &[(0, 1), (2, 3), (4, 5)]);
    (d, Structure::new(graph_language(), 1), PartiteSystem::new(b, vec![0, 1, 0, 2, 1, 2], 3))
}

#[test]
fn picture_lemma_counts() {
    let (d, a, b) = edge_copies_over_triangle();
    let step = picture_lemma(&a, &d, &b, &[0], 1, &PictureOptions::default()).unwrap();
    // Core of two vertices, one parameter word, four fresh vertices.
    assert_eq!((step.record.core_size, step.record.extensions.len(), step.system.size()), (2, 1, 6));
    let all = PictureOptions { extension: ExtensionPolicy::AllEmbeddings, ..PictureOptions::default() };
    let step = picture_lemma(&a, &d, &b, &[0], 1, &all).unwrap();
    assert_eq!((step.record.core_size, step.record.extensions.len(), step.system.size()), (2, 2, 10));
    assert!(validate_partite(&step.system, Some(&d), None).is_valid());
    for e in &step.record.extensions {
        assert!(emb(e, &b.structure, &step.system.structure));
    }
    assert!(picture_lemma(&a, &d, &b, &[0, 1], 1, &all).is_err());
}

#[test]
fn picture_lemma_full_cover_needs_no_extension_vertices() {
    let a = graph(2, &[(0, 1)]);
    let b = PartiteSystem::new(graph(4, &[(0, 2), (1, 3)]), vec![0, 0, 1, 1], 2);
    let step = picture_lemma(&a, &a, &b, &[0, 1], 2, &PictureOptions::default()).unwrap();
    assert_eq!(step.system.size(), step.record.core_size);
    assert_eq!(step.system.size(), 8);
    let (core, _) = power(&b, 2, &Caps::default()).unwrap();
    assert_eq!(step.system, core);
}

#[test]
fn picture_lemma_closed_copies() {
    let mut d = Structure::new(rel_lang(), 3);
    d.add_tuple(0, vec![0, 1]).unwrap();
    d.add_tuple(0, vec![1, 2]).unwrap();
    let mut a = Structure::new(rel_lang(), 2);
    a.add_tuple(0, vec![0, 1]).unwrap();
    let u = vec![SymRef { kind: SymbolKind::Relation, index: 0 }];
    let b = PartiteSystem::transversal(&d);
    let opts = PictureOptions { closed: Some(u.clone()), ..PictureOptions::default() };
    let step = picture_lemma(&a, &d, &b, &[1, 2], 2, &opts).unwrap();
    assert!(!step.record.extensions.is_empty());
    for e in &step.record.extensions {
        assert_eq!(classify_map(e, &d, &step.system.structure, Some(&u)), Some(MapKind::UClosedEmbedding));
    }
    assert!(validate_partite(&step.system, Some(&d), Some(&u)).is_valid());
}
