use std::collections::BTreeSet;

use proptest::prelude::*;
use structures::search::{homomorphisms, subsets_of_size};
use structures::*;

fn rel_lang() -> Language {
    Language::build(&[("E", 2), ("T", 3)], &[]).unwrap()
}

fn fun_lang() -> Language {
    Language::build(&[("E", 2)], &[("F", 1)]).unwrap()
}

fn relational(max_n: usize) -> impl Strategy<Value = Structure> {
    (0..=max_n).prop_flat_map(|n| {
        let m = n.max(1);
        (
            Just(n),
            prop::collection::vec((0..m, 0..m), 0..6),
            prop::collection::vec((0..m, 0..m, 0..m), 0..2),
        )
            .prop_map(|(n, es, ts)| {
                let mut s = Structure::new(rel_lang(), n);
                if n > 0 {
                    for (u, v) in es {
                        s.add_tuple(0, vec![u, v]).unwrap();
                    }
                    for (a, b, c) in ts {
                        s.add_tuple(1, vec![a, b, c]).unwrap();
                    }
                }
                s
            })
    })
}

fn functional(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        (Just(n), prop::collection::vec((0..n, 0..n), 0..5), prop::collection::vec((0..n, 0..n), 0..3)).prop_map(
            |(n, es, fs)| {
                let mut s = Structure::new(fun_lang(), n);
                for (u, v) in es {
                    s.add_tuple(0, vec![u, v]).unwrap();
                }
                for (a, v) in fs {
                    s.add_values(0, vec![a], &[v]).unwrap();
                }
                s
            },
        )
    })
}

fn all_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f: Vec<usize>| (0..m).map(move |w| [f.clone(), vec![w]].concat())).collect();
    }
    out
}

fn is_emb_kind(k: Option<MapKind>) -> bool {
    matches!(k, Some(MapKind::Embedding | MapKind::Isomorphism))
}

/// Brute-force decomposition search over all pairs of vertex sets.
fn reducible_oracle(s: &Structure) -> bool {
    let n = s.size();
    let full = (1u32 << n) - 1;
    let blocks: Vec<u32> = s.blocks().map(|b| b.iter().fold(0, |m, &v| m | 1 << v)).collect();
    (0..=full).any(|x| {
        (0..=full).any(|y| x != full && y != full && x | y == full && blocks.iter().all(|&b| b & !x == 0 || b & !y == 0))
    })
}

fn ordered(n: usize) -> impl Strategy<Value = Structure> {
    (Just(n), Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec((0..n, 0..n), 0..6)).prop_map(
        |(n, perm, es)| {
            let lang = Language::build(&[(ORDER, 2), ("E", 2)], &[]).unwrap();
            let mut s = Structure::new(lang, n);
            for i in 0..n {
                for j in i + 1..n {
                    s.add_tuple(0, vec![perm[i], perm[j]]).unwrap();
                }
            }
            for (u, v) in es {
                s.add_tuple(1, vec![u, v]).unwrap();
            }
            s
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn embeddings_match_brute_force(a in relational(3), b in relational(5)) {
        let brute: Vec<Vec<usize>> = all_maps(a.size(), b.size())
            .into_iter()
            .filter(|f| is_emb_kind(classify_map(f, &a, &b, None)))
            .collect();
        prop_assert_eq!(embeddings(&a, &b), brute);
    }

    #[test]
    fn functional_embeddings_match_brute_force(a in functional(3), b in functional(5)) {
        let brute: Vec<Vec<usize>> = all_maps(a.size(), b.size())
            .into_iter()
            .filter(|f| is_emb_kind(classify_map(f, &a, &b, None)))
            .collect();
        prop_assert_eq!(embeddings(&a, &b), brute);
        let homs: Vec<Vec<usize>> = all_maps(a.size(), b.size())
            .into_iter()
            .filter(|f| classify_map(f, &a, &b, None).is_some())
            .collect();
        prop_assert_eq!(homomorphisms(&a, &b), homs);
    }

    #[test]
    fn homomorphism_embeddings_match_brute_force(a in relational(3), b in relational(4)) {
        let brute: Vec<Vec<usize>> = all_maps(a.size(), b.size())
            .into_iter()
            .filter(|f| matches!(classify_map(f, &a, &b, None),
                Some(MapKind::HomomorphismEmbedding | MapKind::Embedding | MapKind::Isomorphism)))
            .collect();
        let found = MapSearch::new(&a, &b, SearchKind::HomomorphismEmbedding).collect().unwrap();
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn embedding_restricts_to_closed_subsets(a in functional(3), b in functional(5)) {
        for f in embeddings(&a, &b) {
            for k in 0..=a.size() {
                for sub in subsets_of_size(a.size(), k) {
                    let set: BTreeSet<usize> = sub.iter().copied().collect();
                    if !a.is_closed(&set) {
                        continue;
                    }
                    let (s, old) = a.induced(&set).unwrap();
                    let g: Vec<usize> = old.iter().map(|&v| f[v]).collect();
                    prop_assert!(is_emb_kind(classify_map(&g, &s, &b, None)));
                }
            }
        }
    }

    #[test]
    fn closure_is_a_closure_operator(s in functional(6), seed in prop::collection::btree_set(0usize..6, 0..4), extra in prop::collection::btree_set(0usize..6, 0..3)) {
        let n = s.size();
        let seed: BTreeSet<usize> = seed.into_iter().filter(|&v| v < n).collect();
        let bigger: BTreeSet<usize> = seed.iter().chain(extra.iter()).copied().filter(|&v| v < n).collect();
        let c = s.generated_closure(&seed);
        prop_assert!(seed.is_subset(&c));
        prop_assert_eq!(s.generated_closure(&c), c.clone());
        prop_assert!(c.is_subset(&s.generated_closure(&bigger)));
        prop_assert!(s.is_closed(&c));
    }

    #[test]
    fn irreducibility_matches_clique_criterion(s in relational(5)) {
        let n = s.size();
        let g = gaifman_graph(&s);
        let complete = g.tuples(0).len() == n * n.saturating_sub(1);
        let r = is_irreducible(&s);
        prop_assert_eq!(r.irreducible, complete);
        prop_assert_eq!(r.irreducible, !reducible_oracle(&s));
        if let Some((x, y)) = r.witness {
            let xs: BTreeSet<usize> = x.into_iter().collect();
            let ys: BTreeSet<usize> = y.into_iter().collect();
            prop_assert!(xs.len() < n && ys.len() < n && xs.union(&ys).count() == n);
            prop_assert!(s.blocks().all(|b| b.iter().all(|v| xs.contains(v)) || b.iter().all(|v| ys.contains(v))));
        }
    }

    #[test]
    fn functional_irreducibility_matches_oracle(s in functional(5)) {
        let r = is_irreducible(&s);
        if s.size() > 1 {
            // Every subset pair of the oracle must also be closed for a functional decomposition.
            let n = s.size();
            let full = (1u32 << n) - 1;
            let blocks: Vec<u32> = s.blocks().map(|b| b.iter().fold(0, |m, &v| m | 1 << v)).collect();
            let closed = |m: u32| {
                let set: BTreeSet<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                s.is_closed(&set)
            };
            let oracle = (0..full).any(|x| (0..full).any(|y| x | y == full && closed(x) && closed(y)
                && blocks.iter().all(|&b| b & !x == 0 || b & !y == 0)));
            prop_assert_eq!(r.irreducible, !oracle);
        }
    }

    #[test]
    fn ordered_structures_are_rigid(s in (1usize..6).prop_flat_map(ordered)) {
        prop_assert!(s.is_ordered());
        prop_assert_eq!(automorphisms(&s).len(), 1);
    }

    #[test]
    fn partial_automorphisms_verify(s in functional(4)) {
        let all = partial_automorphisms(&s, None);
        prop_assert!(all.iter().all(|p| p.verify(&s)));
        prop_assert_eq!(all.iter().filter(|p| p.domain.len() == s.size()).count(), automorphisms(&s).len());
    }
}
