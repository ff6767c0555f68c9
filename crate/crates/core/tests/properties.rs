use proptest::prelude::*;

use transversal_lab::canon::{canonical_form, canonical_labeling};
use transversal_lab::domination::shrink_to_4;
use transversal_lab::io::{parse_hg, write_hg};
use transversal_lab::solver::{greedy_peel, tau_bruteforce, tau_bruteforce_constrained, Constraints, Solver};
use transversal_lab::{Error, Hypergraph};

fn hypergraph(max_n: usize, sizes: std::ops::RangeInclusive<usize>, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (sizes.start().max(&1).to_owned()..=max_n).prop_flat_map(move |n| {
        let lo = (*sizes.start()).min(n);
        let hi = (*sizes.end()).min(n);
        let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), lo..=hi);
        proptest::collection::vec(edge, 0..=max_m).prop_map(move |edges| Hypergraph::new(n, edges).unwrap())
    })
}

fn tau(h: &Hypergraph) -> usize {
    tau_bruteforce(h).unwrap().tau
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_lifting(h in hypergraph(12, 2..=4, 14), picks in proptest::collection::vec((0usize..12, any::<bool>()), 0..=3)) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (v, into_x) in picks {
            let v = v % h.n();
            if x.contains(&v) || y.contains(&v) {
                continue;
            }
            if into_x { x.push(v) } else { y.push(v) }
        }
        match h.reduce(&x, &y) {
            Ok(r) => prop_assert!(tau(&h) <= x.len() + tau(&r.hypergraph)),
            Err(Error::ZeroEdge(j)) => prop_assert!(h.edges()[j].iter().all(|v| y.contains(v))),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn edge_deletion_changes_tau_by_at_most_one(h in hypergraph(12, 2..=4, 14)) {
        let t = tau(&h);
        for j in 0..h.m() {
            let d = tau(&h.remove_edge(j).unwrap());
            prop_assert!(d <= t && d + 1 >= t);
        }
    }

    #[test]
    fn cleanup_preserves_tau(h in hypergraph(12, 1..=5, 14)) {
        let c = h.subset_edge_cleanup();
        prop_assert_eq!(tau(&c), tau(&h));
        for (i, e) in c.edges().iter().enumerate() {
            for (j, f) in c.edges().iter().enumerate() {
                prop_assert!(i == j || !e.iter().all(|v| f.contains(v)));
            }
        }
    }

    #[test]
    fn tau_is_additive(a in hypergraph(8, 2..=4, 8), b in hypergraph(8, 2..=4, 8)) {
        prop_assert_eq!(tau(&a.disjoint_union(&b)), tau(&a) + tau(&b));
    }

    #[test]
    fn bnb_matches_bruteforce(h in hypergraph(16, 2..=4, 24)) {
        let r = Solver::new().solve(&h).unwrap();
        prop_assert!(r.witness.is_valid_for(&h));
        prop_assert_eq!(r.witness.len(), r.tau);
        prop_assert_eq!(r.tau, tau(&h));
    }

    #[test]
    fn canonical_witness_is_lexicographically_smallest(h in hypergraph(12, 2..=4, 12)) {
        let fast = Solver::new().canonical(true).solve(&h).unwrap();
        let slow = tau_bruteforce(&h).unwrap();
        prop_assert_eq!(fast.witness.vertices, slow.witness.vertices);
    }

    #[test]
    fn including_vertices_matches_reduction(h in hypergraph(12, 2..=4, 14), s in proptest::collection::btree_set(0usize..12, 0..=3)) {
        let s: Vec<usize> = s.into_iter().filter(|&v| v < h.n()).collect();
        let constrained = Solver::new().solve_constrained(&h, &Constraints::include(s.clone())).unwrap();
        let reduced = h.reduce(&s, &[]).unwrap();
        prop_assert_eq!(constrained.tau, s.len() + tau(&reduced.hypergraph));
        prop_assert_eq!(constrained.tau, tau_bruteforce_constrained(&h, &Constraints::include(s)).unwrap().tau);
    }

    #[test]
    fn adding_an_edge_never_lowers_tau(h in hypergraph(12, 2..=4, 12), e in proptest::collection::btree_set(0usize..12, 1..=4)) {
        let e: Vec<usize> = e.into_iter().filter(|&v| v < h.n()).collect();
        prop_assume!(!e.is_empty());
        prop_assert!(tau(&h.add_edge(&e).unwrap()) >= tau(&h));
    }

    #[test]
    fn deleting_a_vertex_never_raises_tau(h in hypergraph(12, 2..=4, 14), v in 0usize..12) {
        let v = v % h.n();
        prop_assert!(tau(&h.reduce(&[v], &[]).unwrap().hypergraph) <= tau(&h));
    }

    #[test]
    fn peel_contract(h in hypergraph(14, 2..=4, 24), threshold in 1usize..5) {
        let peel = greedy_peel(&h, threshold).unwrap();
        prop_assert!(peel.remainder.hypergraph.max_degree() < threshold);
        prop_assert!(tau(&h) <= peel.removed.len() + tau(&peel.remainder.hypergraph));
    }

    #[test]
    fn shrinking_never_lowers_tau(h in hypergraph(10, 4..=7, 10), protect in proptest::option::of(0usize..10)) {
        let protect = protect.map(|p| p % h.n());
        let s = shrink_to_4(&h, protect).unwrap();
        prop_assert!(s.edges().iter().all(|e| e.len() == 4));
        if let Some(p) = protect {
            for (old, new) in h.edges().iter().zip(s.edges()) {
                prop_assert_eq!(old.contains(&p), new.contains(&p));
            }
        }
        prop_assert!(tau(&h) <= tau(&s));
    }

    #[test]
    fn canonical_form_ignores_labels(h in hypergraph(10, 1..=4, 10), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..h.n()).collect();
        let mut state = seed;
        for i in (1..perm.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let g = h.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        let (form, p) = canonical_labeling(&g);
        prop_assert_eq!(g.relabel(&p), form.to_hypergraph());
    }

    #[test]
    fn hg_round_trip(h in hypergraph(12, 1..=5, 12), canonical in any::<bool>()) {
        let back = parse_hg(&write_hg(&h, canonical)).unwrap();
        prop_assert_eq!(&back, &h);
        if !canonical {
            prop_assert_eq!(back.edges(), h.edges());
        }
    }
}
