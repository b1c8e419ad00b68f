use amalgamation::*;
use proptest::prelude::*;
use structures::build::{complete_graph, graph};
use structures::irreducible::maximal_cliques;
use structures::search::{embeddings, MapSearch, SearchKind};
use structures::{Index, Structure};

fn small_graph(max_n: usize) -> impl Strategy<Value = Structure> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..6)
            .prop_map(move |es| graph(n, &es.into_iter().filter(|(u, v)| u != v).collect::<Vec<_>>()))
    })
}

fn triangle_free_leaf() -> impl Strategy<Value = Structure> {
    prop_oneof![
        Just(graph(2, &[(0, 1)])),
        Just(graph(3, &[(0, 1), (1, 2)])),
        Just(graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn free_amalgam_grades_free(a in small_graph(2), b1 in small_graph(4), b2 in small_graph(4), i in 0usize..50, j in 0usize..50) {
        let e1 = embeddings(&a, &b1);
        let e2 = embeddings(&a, &b2);
        prop_assume!(!e1.is_empty() && !e2.is_empty());
        let p = AmalgamationProblem::new(a, b1, b2, e1[i % e1.len()].clone(), e2[j % e2.len()].clone()).unwrap();
        let am = free_amalgam(&p);
        prop_assert_eq!(am.structure.size(), p.left.size() + p.right.size() - p.base.size());
        prop_assert_eq!(is_amalgam(&am.structure, &p, &am.beta1, &am.beta2), Grade::Free);
    }

    /// Tree amalgams of triangle-free graphs over cliques stay in the class,
    /// so the identity is a homomorphism-embedding into a member.
    #[test]
    fn tree_amalgams_complete_in_class(leaf in triangle_free_leaf(), picks in prop::collection::vec((0usize..8, 0usize..8, any::<bool>()), 1..3)) {
        let mut recipe = TreeRecipe::Leaf;
        let mut current = leaf.clone();
        for (x, y, over_edge) in picks {
            let cliques: Vec<Vec<usize>> = maximal_cliques(&Index::new(&current).neighbors);
            let k = &cliques[x % cliques.len()];
            let (overlap, f1, f2) = if over_edge && k.len() == 2 {
                (graph(2, &[(0, 1)]), k.clone(), vec![0, 1])
            } else {
                (graph(1, &[]), vec![k[y % k.len()]], vec![0])
            };
            recipe = TreeRecipe::join(recipe, TreeRecipe::Leaf, overlap, f1, f2);
            current = tree_amalgam(&TreeAmalgamSpec { leaf: leaf.clone(), recipe: recipe.clone() }).unwrap().structure;
        }
        prop_assume!(current.size() <= 8);
        prop_assert!(forbidden_free(&current, &[complete_graph(3)], SearchKind::Monomorphism).is_none());
        let he = MapSearch::new(&current, &current, SearchKind::HomomorphismEmbedding).first().unwrap();
        prop_assert!(he.is_some());
        let t = tree_amalgam(&TreeAmalgamSpec { leaf: leaf.clone(), recipe }).unwrap();
        for c in &t.copies {
            prop_assert!(structures::maps::is_embedding(c, &leaf, &t.structure));
        }
    }
}
