use std::sync::Arc;

use proptest::prelude::*;

use strimm_core::altpath::{has_alt_path, max_pivots, AltPathQuery};
use strimm_core::corpus::canonical_key;
use strimm_core::decomp::{sp2seps, SepMode};
use strimm_core::harness::{random_no_k_alt, RandomSpec};
use strimm_core::immersion::{check_embedding, find_embedding, Embedding, EmbeddingConstraints, SearchGuard};
use strimm_core::io::{embedding_to_json, labelled_to_json, parse_embedding, parse_labelled};
use strimm_core::iso::are_isomorphic;
use strimm_core::sp::{all_separators, recognize, separator, sp_compose, truncate, Side, SpShape};
use strimm_core::{LabelledDigraph, MultiDigraph, QuasiOrder};

fn digraph(max_n: usize, max_m: usize) -> impl Strategy<Value = MultiDigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_m).prop_map(move |pairs| {
            let pairs: Vec<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
            MultiDigraph::from_edges(n, &pairs).unwrap()
        })
    })
}

fn labelled(max_n: usize, max_m: usize) -> impl Strategy<Value = LabelledDigraph> {
    digraph(max_n, max_m).prop_flat_map(|d| {
        let n = d.vertex_count();
        proptest::collection::vec(0..3usize, n).prop_map(move |labels| {
            let qo = QuasiOrder::chain(vec!["0".into(), "1".into(), "2".into()]).unwrap();
            LabelledDigraph::new(d.clone(), Arc::new(qo), labels).unwrap()
        })
    })
}

fn shape() -> impl Strategy<Value = SpShape> {
    let leaf = any::<bool>().prop_map(|forward| SpShape::Edge { forward });
    leaf.prop_recursive(3, 8, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(SpShape::Series),
            proptest::collection::vec(inner, 2..=3).prop_map(SpShape::Parallel),
        ]
    })
}

/// Same digraph with vertices permuted and edges listed in another order.
fn shuffled(d: &MultiDigraph, perm: &[usize], rotate: usize) -> MultiDigraph {
    let mut pairs: Vec<_> = d.edge_pairs().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    if !pairs.is_empty() {
        let r = rotate % pairs.len();
        pairs.rotate_left(r);
    }
    MultiDigraph::from_edges(d.vertex_count(), &pairs).unwrap()
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn found_embeddings_pass_the_checker(h in labelled(3, 4), g in labelled(5, 8), labels in any::<bool>()) {
        let c = if labels { EmbeddingConstraints::labelled() } else { EmbeddingConstraints::default() };
        if let Some(emb) = find_embedding(&h, &g, &c, &SearchGuard::default()).unwrap() {
            prop_assert!(check_embedding(&h, &g, &emb, &c).unwrap().is_ok());
            prop_assert!(h.digraph.edge_count() <= g.digraph.edge_count());
            prop_assert!(h.digraph.vertex_count() <= g.digraph.vertex_count());
        }
    }

    #[test]
    fn every_digraph_embeds_into_itself(d in labelled(5, 7)) {
        let c = EmbeddingConstraints::labelled();
        prop_assert!(check_embedding(&d, &d, &Embedding::identity(&d.digraph), &c).unwrap().is_ok());
        prop_assert!(find_embedding(&d, &d, &c, &SearchGuard::default()).unwrap().is_some());
    }

    #[test]
    fn search_is_invariant_under_relabelling(h in labelled(3, 4), g in labelled(4, 6), seed in any::<u64>()) {
        let perm = permutation(g.digraph.vertex_count(), seed);
        let moved = shuffled(&g.digraph, &perm, seed as usize);
        let mut labels = vec![0; perm.len()];
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = g.labels[v];
        }
        let g2 = LabelledDigraph::new(moved, g.qo.clone(), labels).unwrap();
        prop_assert!(are_isomorphic(&g, &g2, true));
        let c = EmbeddingConstraints::labelled();
        let guard = SearchGuard::default();
        prop_assert_eq!(
            find_embedding(&h, &g, &c, &guard).unwrap().is_some(),
            find_embedding(&h, &g2, &c, &guard).unwrap().is_some()
        );
    }

    #[test]
    fn pivots_match_the_alternating_path_test(d in digraph(6, 8), k in 1usize..5) {
        let p = max_pivots(&d, &AltPathQuery::default()).unwrap();
        prop_assert_eq!(has_alt_path(&d, &AltPathQuery::new(k)), p >= k);
    }

    #[test]
    fn pivots_do_not_grow_when_edges_are_removed(d in digraph(6, 8), drop in any::<prop::sample::Index>()) {
        prop_assume!(d.edge_count() > 0);
        let e = drop.index(d.edge_count());
        let (smaller, _) = d.delete_edges(&[e]);
        let q = AltPathQuery::default();
        prop_assert!(max_pivots(&smaller, &q) <= max_pivots(&d, &q));
    }

    #[test]
    fn canonical_key_ignores_vertex_and_edge_order(d in digraph(6, 9), seed in any::<u64>()) {
        let perm = permutation(d.vertex_count(), seed);
        prop_assert_eq!(canonical_key(&d), canonical_key(&shuffled(&d, &perm, seed as usize)));
    }

    #[test]
    fn interchange_round_trips(d in labelled(5, 7)) {
        let back = parse_labelled(&labelled_to_json(&d).to_string()).unwrap();
        prop_assert_eq!(back.digraph.edge_pairs(), d.digraph.edge_pairs());
        prop_assert_eq!(back.digraph.vertex_names(), d.digraph.vertex_names());
        prop_assert_eq!(back.labels, d.labels);
        let emb = Embedding::identity(&d.digraph);
        let text = embedding_to_json(&d.digraph, &d.digraph, &emb).to_string();
        prop_assert_eq!(parse_embedding(&text, &d.digraph, &d.digraph).unwrap(), emb);
    }

    #[test]
    fn composed_shapes_are_recognised(s in shape()) {
        let (d, a, b) = s.build();
        match sp_compose(&s) {
            Ok(tr) => {
                let again = recognize(&tr.digraph, tr.s, tr.t).unwrap().expect("composed triples are series-parallel");
                prop_assert_eq!(again.code(), tr.code());
                prop_assert_eq!(tr.code(), s.normalized().code());
                prop_assert!(recognize(&d, a, b).unwrap().is_some());
            }
            // some terminal-to-terminal thread changes direction
            Err(_) => prop_assert!(recognize(&d, a, b).unwrap().is_none()),
        }
    }

    #[test]
    fn separator_is_a_smallest_cut(s in shape()) {
        let Ok(tr) = sp_compose(&s) else { return Ok(()) };
        prop_assume!(tr.direction.is_one_way());
        let best = separator(&tr);
        let all = all_separators(&tr).unwrap();
        prop_assert!(!all.is_empty());
        for cut in &all {
            prop_assert_eq!(cut.size(), best.size());
            for side in [Side::X, Side::Y] {
                let t = truncate(&tr, cut, side, None).unwrap();
                prop_assert!(t.triple.direction.is_one_way());
                prop_assert!(t.triple.digraph.edge_count() <= tr.digraph.edge_count());
            }
        }
    }

    #[test]
    fn listed_separations_are_valid(d in digraph(6, 9)) {
        for mode in [SepMode::All, SepMode::Maximal] {
            let Ok(list) = sp2seps(&d, mode) else { continue };
            for s in &list {
                prop_assert!(s.separation.validate(&d).is_ok());
                prop_assert_eq!(s.separation.boundary(&d).len(), 2);
            }
        }
    }

    #[test]
    fn sampler_output_is_certified_and_reproducible(n in 2usize..6, k in 1usize..4, seed in 0u64..1000) {
        let spec = RandomSpec::new(n, k, seed);
        let (a, b) = match (random_no_k_alt(&spec), random_no_k_alt(&spec)) {
            (Ok(a), Ok(b)) => (a, b),
            // without a 1-alternating path only duplicated directed paths
            // and cycles qualify, which random sampling rarely hits
            (Err(_), Err(_)) if k == 1 && n > 2 => return Ok(()),
            (a, b) => return Err(TestCaseError::fail(format!("{:?} / {:?}", a.err(), b.err()))),
        };
        prop_assert!(a.max_pivots < k);
        prop_assert_eq!(max_pivots(&a.digraph, &AltPathQuery::default()), Some(a.max_pivots));
        prop_assert_eq!(a.digraph.edge_pairs(), b.digraph.edge_pairs());
        prop_assert!(a.digraph.is_connected());
    }
}
