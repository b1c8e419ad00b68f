use std::collections::BTreeSet;

use halesjewett::{enumerate_words, word_index};
use partite::*;
use proptest::prelude::*;
use structures::build::ordered_graph;
use structures::maps::{classify_map, compose};
use structures::{Language, MapKind, Structure};

fn lang() -> Language {
    Language::build(&[("R", 2)], &[]).unwrap()
}

/// Random A on `k` vertices and an A-partite blow-up with `copies[p]` vertices over `p`,
/// closed so that every adjacent pair carries all tuples of A over its partitions.
fn blow_up(k: usize, a_bits: u8, copies: &[usize], edge_bits: u16) -> (Structure, PartiteSystem) {
    let mut a = Structure::new(lang(), k);
    for (i, (u, v)) in (0..k).flat_map(|u| (0..k).map(move |v| (u, v))).enumerate() {
        if a_bits >> i & 1 == 1 {
            a.add_tuple(0, vec![u, v]).unwrap();
        }
    }
    let projection: Vec<usize> = (0..k).flat_map(|p| std::iter::repeat(p).take(copies[p])).collect();
    let n = projection.len();
    let mut b = Structure::new(lang(), n);
    let mut bit = 0;
    for x in 0..n {
        for y in 0..n {
            if projection[x] != projection[y] || x == y {
                let (p, q) = (projection[x], projection[y]);
                if a.has_tuple(0, &[p, q]) && (x == y || edge_bits >> (bit % 16) & 1 == 1) {
                    b.add_tuple(0, vec![x, y]).unwrap();
                }
                bit += 1;
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && (b.has_tuple(0, &[x, y]) || b.has_tuple(0, &[y, x])) {
                let (p, q) = (projection[x], projection[y]);
                for (s, t, u, v) in [(p, q, x, y), (q, p, y, x)] {
                    if a.has_tuple(0, &[s, t]) {
                        b.add_tuple(0, vec![u, v]).unwrap();
                    }
                }
            }
        }
    }
    (a, PartiteSystem::new(b, projection, k))
}

fn is_emb(k: Option<MapKind>) -> bool {
    matches!(k, Some(MapKind::Embedding | MapKind::Isomorphism))
}

fn ordered_triple() -> impl Strategy<Value = (Structure, Structure)> {
    (1usize..=4, any::<u8>(), 1usize..=2, any::<u8>()).prop_map(|(n, bits, k, pick)| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e).collect();
        let b = ordered_graph(n, &edges);
        let k = k.min(n);
        let mut set: BTreeSet<usize> = BTreeSet::new();
        let mut p = pick as usize;
        while set.len() < k {
            set.insert(p % n);
            p = p / n + 1;
        }
        let (a, _) = b.induced(&set).unwrap();
        (a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lemma_witnesses_replay(
        k in 1usize..=2, a_bits in any::<u8>(), c0 in 1usize..=2, c1 in 1usize..=2, edge_bits in any::<u16>(), n in 1usize..=2,
    ) {
        let (a, b) = blow_up(k, a_bits, &[c0, c1], edge_bits);
        prop_assert!(validate_partite(&b, Some(&a), None).is_valid());
        let out = match induced_partite_lemma(&a, &b, n, None, &Caps::default()) {
            Err(PartiteError::EmptyAlphabet) => return Ok(()),
            r => r.unwrap(),
        };
        let w = &out.witnesses;
        let c = &out.system.structure;
        prop_assert!(validate_partite(&out.system, Some(&a), None).is_valid());
        let words = enumerate_words(w.sigma.len(), n);
        for word in &words {
            prop_assert!(is_emb(classify_map(&w.e(word), &a, c, None)));
        }
        // Any coloring of the e_w that is constant on a line is constant on the f_W-copies of A.
        let chi: Vec<usize> = (0..words.len()).map(|i| (i * 7 + edge_bits as usize) % 2).collect();
        for pw in w.parameter_words() {
            let f = w.f(&pw);
            prop_assert!(is_emb(classify_map(&f, &b.structure, c, None)));
            let line: Vec<usize> = (0..w.sigma.len()).map(|l| word_index(&pw.substitute(l, w.sigma.len()).unwrap(), w.sigma.len())).collect();
            for (l, phi) in w.sigma.iter().enumerate() {
                prop_assert_eq!(compose(&f, phi), w.e(&pw.substitute(l, w.sigma.len()).unwrap()));
            }
            if line.iter().all(|&i| chi[i] == chi[line[0]]) {
                let colors: BTreeSet<usize> = w.sigma.iter().map(|phi| {
                    let e = compose(&f, phi);
                    chi[words.iter().position(|x| w.e(x) == e).unwrap()]
                }).collect();
                prop_assert_eq!(colors.len(), 1);
            }
        }
        if out.mode == Mode::Full {
            prop_assert_eq!(certify_ramsey(w).unwrap_or(true), true);
        }
    }

    #[test]
    fn non_induced_lemma_copies_are_embeddings(
        k in 1usize..=2, a_bits in any::<u8>(), c0 in 1usize..=2, c1 in 1usize..=2, edge_bits in any::<u16>(), n in 1usize..=2,
    ) {
        let (a, b) = blow_up(k, a_bits, &[c0, c1], edge_bits);
        let out = match partite_lemma(&PartiteSystem::transversal(&a), &b, n, &Caps::default()) {
            Err(PartiteError::EmptyAlphabet) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(validate_partite(&out.system, None, None).is_valid());
        let c = &out.system.structure;
        for pw in out.witnesses.parameter_words() {
            prop_assert!(is_emb(classify_map(&out.witnesses.f(&pw), &b.structure, c, None)));
        }
        for word in enumerate_words(out.witnesses.sigma.len(), n) {
            prop_assert!(is_emb(classify_map(&out.witnesses.e(&word), &a, c, None)));
        }
    }

    #[test]
    fn construction_invariants((a, b) in ordered_triple(), hj in any::<bool>()) {
        let exponent = if hj { ExponentPolicy::HjAttempt { fallback: 1 } } else { ExponentPolicy::Witness(1) };
        let opts = ConstructionOptions { exponent, ..ConstructionOptions::default() };
        let t = induced_construction(&a, &b, &b, &opts).unwrap();
        prop_assert_eq!(t.unprojected_irreducible(), None);
        for (i, p) in t.pictures.iter().enumerate() {
            prop_assert!(validate_partite(p, Some(&b), None).is_valid());
            prop_assert!(is_acyclic(&p.structure, 0));
            if i > 0 {
                for e in &t.steps[i - 1].extensions {
                    prop_assert!(is_emb(classify_map(e, &t.pictures[i - 1].structure, &p.structure, None)));
                }
            }
        }
    }
}
