mod common;

use std::collections::BTreeSet;

use common::*;
use cubetool_core::complex::{barycentric_subdivision, build, is_npc, AxisMap, CubeComplex};
use cubetool_core::completion::canonical_completion;
use cubetool_core::gog::{gluing_check, portal_matching, virtual_modify, Word};
use cubetool_core::wallgraph::{class_equal, greedy_color, is_proper, pullback, WallGraph};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((prop::sample::select(vec!["a", "b", "c"]), prop::bool::ANY), 0..12).prop_map(|ls| {
        Word::from_letters(ls.into_iter().map(|(g, pos)| (g.to_string(), if pos { 1 } else { -1 })))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_inverse_cancels(w in word()) {
        prop_assert!(w.concat(&w.inverse()).is_empty());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn word_text_round_trip(w in word()) {
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn word_concat_associates(a in word(), b in word(), c in word()) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
    }

    #[test]
    fn axis_maps_invert(n in 1usize..4, pick in 0usize..48, x in 0u32..8) {
        let all = AxisMap::all(n);
        let m = &all[pick % all.len()];
        let x = x & ((1 << n) - 1);
        prop_assert!(m.then(&m.inverse()).is_identity());
        prop_assert_eq!(m.inverse().apply(m.apply(x)), x);
    }

    #[test]
    fn npc_matches_brute_force(seed in any::<u64>()) {
        let x = random_complex(&mut rng(seed), 50);
        prop_assert_eq!(is_npc(&x).is_npc, brute_npc(&x));
    }

    #[test]
    fn subdivision_matches_face_intervals(m in 1usize..4, n in 1usize..4) {
        let x = build::grid(m, n);
        let counts = barycentric_subdivision(&x).complex.counts();
        prop_assert_eq!(counts, face_intervals(&x));
    }

    #[test]
    fn subdivision_stays_npc(seed in any::<u64>()) {
        let x = random_complex(&mut rng(seed), 20);
        if is_npc(&x).is_npc {
            prop_assert!(is_npc(&barycentric_subdivision(&x).complex).is_npc);
        }
    }

    #[test]
    fn completion_degree_is_domain_size(seed in any::<u64>()) {
        let f = random_graph_isometry(&mut rng(seed), 20);
        let c = canonical_completion(&f).unwrap();
        let a0 = f.domain().vertices().count();
        prop_assert_eq!(c.degree, a0);
        prop_assert_eq!(c.completion.len(), a0 * f.codomain().len());
    }

    #[test]
    fn greedy_is_proper(n in 1usize..30, edges in prop::collection::vec((0usize..30, 0usize..30), 0..80)) {
        let edges: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let g = WallGraph::from_edges(n, 1, &edges);
        let c = greedy_color(&g);
        prop_assert!(is_proper(&g, &c));
        prop_assert!(c.iter().all(|&k| k as usize <= g.max_degree + 1));
    }

    #[test]
    fn class_equality_is_reflexive_and_symmetric(seed in any::<u64>(), n in 1usize..12) {
        use rand::Rng;
        let mut r = rng(seed);
        let edges: Vec<(usize, usize)> = (0..2 * n).map(|_| (r.random_range(0..n), r.random_range(0..n))).collect();
        let g = WallGraph::from_edges(n, 1, &edges);
        let c = greedy_color(&g);
        let mut c2 = c.clone();
        c2[r.random_range(0..n)] = r.random_range(1..4);
        for w in 0..n {
            prop_assert!(class_equal(&c, &c, &g, w).unwrap());
            prop_assert_eq!(class_equal(&c, &c2, &g, w).unwrap(), class_equal(&c2, &c, &g, w).unwrap());
        }
        // the identity permutation fixes every colouring
        let id: Vec<usize> = (0..n).collect();
        prop_assert_eq!(pullback(&c, &id), c);
    }

    #[test]
    fn virtual_modification_keeps_balance(seed in any::<u64>()) {
        let l = random_balanced_ledger(&mut rng(seed));
        prop_assert!(gluing_check(&l).is_ok());
        let m = virtual_modify(&l).unwrap();
        let report = gluing_check(&m).unwrap();
        prop_assert!(report.classes.iter().all(|c| c.count_balanced()));
        prop_assert!(m.triplets.iter().all(|t| t.index == 1));
        let pairs = portal_matching(&m).unwrap();
        let left: BTreeSet<&String> = pairs.iter().map(|p| &p.0).collect();
        prop_assert_eq!(left.len(), pairs.len());
    }

    #[test]
    fn pathologies_match_brute_force(seed in any::<u64>()) {
        let x: CubeComplex = random_complex(&mut rng(seed), 50);
        let lib = cubetool_core::hyperplanes::pathologies(&x);
        prop_assert_eq!(lib.special, brute_special(&x).special);
    }
}
