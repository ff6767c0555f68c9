//! Stored instances and derived quantities checked against independent
//! searches.

use std::collections::HashSet;

use itertools::Itertools;
use transversal_lab::bounds::{b_i_count, certify, TheoremId};
use transversal_lab::canon::{canonical_form, is_isomorphic, CanonicalForm};
use transversal_lab::domination::{gamma_t, gamma_t_bruteforce, heawood_bipartite_complement, onh};
use transversal_lab::family_b::{generate_all_b, Recognizer};
use transversal_lab::instances::{f7_bar, h10, h6, h8, random_class_h, random_connected_graph};
use transversal_lab::solver::tau_bruteforce;
use transversal_lab::Hypergraph;

/// All 3-regular 4-uniform simple hypergraphs on 8 vertices with τ = 3, up
/// to isomorphism.
fn search_h8() -> HashSet<CanonicalForm> {
    let quads: Vec<Vec<usize>> = (0..8).combinations(4).collect();
    let mut found = HashSet::new();
    let mut chosen = Vec::new();
    fn go(quads: &[Vec<usize>], start: usize, deg: &mut [usize; 8], chosen: &mut Vec<usize>, found: &mut HashSet<CanonicalForm>) {
        if chosen.len() == 6 {
            if deg.iter().all(|&d| d == 3) {
                let h = Hypergraph::new(8, chosen.iter().map(|&i| quads[i].clone())).unwrap();
                if tau_bruteforce(&h).unwrap().tau == 3 {
                    found.insert(canonical_form(&h));
                }
            }
            return;
        }
        for i in start..quads.len() {
            if quads[i].iter().any(|&v| deg[v] == 3) {
                continue;
            }
            for &v in &quads[i] {
                deg[v] += 1;
            }
            chosen.push(i);
            go(quads, i + 1, deg, chosen, found);
            chosen.pop();
            for &v in &quads[i] {
                deg[v] -= 1;
            }
        }
    }
    go(&quads, 0, &mut [0; 8], &mut chosen, &mut found);
    found
}

#[test]
fn golden_h8_is_found_by_exhaustive_search() {
    let found = search_h8();
    assert!(!found.is_empty());
    assert!(found.contains(&canonical_form(&h8())));
}

/// Linear 4-uniform hypergraphs on 10 vertices with 5 edges and τ = 3, up to
/// isomorphism. The lexicographically first edge can be taken as
/// `{0,1,2,3}` after relabelling.
fn search_h10() -> HashSet<CanonicalForm> {
    let quads: Vec<Vec<usize>> = (0..10).combinations(4).collect();
    let mut found = HashSet::new();
    let mut chosen = vec![0usize];
    fn go(quads: &[Vec<usize>], start: usize, chosen: &mut Vec<usize>, found: &mut HashSet<CanonicalForm>) {
        if chosen.len() == 5 {
            let h = Hypergraph::new(10, chosen.iter().map(|&i| quads[i].clone())).unwrap();
            if tau_bruteforce(&h).unwrap().tau == 3 {
                found.insert(canonical_form(&h));
            }
            return;
        }
        for i in start..quads.len() {
            let linear = chosen
                .iter()
                .all(|&j| quads[i].iter().filter(|v| quads[j].contains(v)).count() <= 1);
            if linear {
                chosen.push(i);
                go(quads, i + 1, chosen, found);
                chosen.pop();
            }
        }
    }
    go(&quads, 1, &mut chosen, &mut found);
    found
}

#[test]
fn golden_h10_is_found_by_exhaustive_search() {
    let found = search_h10();
    assert!(!found.is_empty());
    assert!(found.contains(&canonical_form(&h10())));
}

#[test]
fn golden_predicates() {
    let h = h8();
    assert!(h.is_regular(3) && h.is_uniform(4));
    assert_eq!((h.n(), h.m(), tau_bruteforce(&h).unwrap().tau), (8, 6, 3));
    let h = h10();
    assert!(h.is_linear() && h.is_uniform(4));
    assert_eq!((h.n(), h.m(), tau_bruteforce(&h).unwrap().tau), (10, 5, 3));
    let h = h6();
    let r = certify(&h, TheoremId::Cm6Tau).unwrap();
    assert!(r.is_equality());
}

#[test]
fn fano_complement_and_heawood_complement_agree() {
    let f7 = f7_bar();
    assert!(f7.is_regular(4) && f7.is_uniform(4));
    assert_eq!((f7.n(), f7.m()), (7, 7));
    let tau = tau_bruteforce(&f7).unwrap().tau;
    assert_eq!(tau, 3);
    let g = heawood_bipartite_complement();
    assert_eq!(gamma_t(&g).unwrap(), 2 * tau);
    // The ONH splits into one copy of F7-bar per partite set.
    let comps = onh(&g).unwrap().components();
    assert_eq!(comps.len(), 2);
    for c in comps {
        assert!(is_isomorphic(&c.hypergraph, &f7));
    }
}

#[test]
fn gamma_t_matches_direct_enumeration() {
    for seed in 0..150u64 {
        let n = 2 + (seed % 11) as usize;
        let g = random_connected_graph(n, seed).unwrap();
        assert_eq!(gamma_t(&g).unwrap(), gamma_t_bruteforce(&g).unwrap(), "seed {seed}");
    }
}

/// `bⁱ` under the broadest reading: any connected edge subset, on the
/// vertices it covers, that is a bad hypergraph met by exactly `i` other
/// edges.
fn b_i_any_subset(h: &Hypergraph, i: usize, rec: &Recognizer) -> usize {
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for mask in 1u32..(1 << h.m()) {
        let edges: Vec<usize> = (0..h.m()).filter(|j| mask >> j & 1 == 1).collect();
        let vertices: Vec<usize> = edges.iter().flat_map(|&j| h.edges()[j].iter().copied()).sorted().dedup().collect();
        let sub = h.sub_hypergraph(&vertices, &edges).hypergraph;
        if !sub.is_connected() {
            continue;
        }
        let touching = (0..h.m())
            .filter(|j| !edges.contains(j))
            .filter(|&j| h.edges()[j].iter().any(|v| vertices.contains(v)))
            .count();
        if touching == i && rec.recognize(&sub).unwrap().is_some() {
            pieces.push(vertices);
        }
    }
    (0..=pieces.len())
        .rev()
        .find(|&k| {
            pieces.iter().combinations(k).any(|c| {
                let all: Vec<usize> = c.iter().flat_map(|p| p.iter().copied()).collect();
                all.len() == all.iter().unique().count()
            })
        })
        .unwrap_or(0)
}

#[test]
fn b_i_reading_agrees_with_arbitrary_subsets() {
    let rec = Recognizer::new();
    let mut nonzero = 0;
    for seed in 0..300u64 {
        let h = random_class_h(4 + (seed % 7) as usize, seed).unwrap();
        if h.m() > 12 {
            continue;
        }
        for i in 0..=2 {
            let ours = b_i_count(&h, i, &rec).unwrap();
            assert_eq!(ours, b_i_any_subset(&h, i, &rec), "seed {seed}, i = {i}: {h}");
            nonzero += (ours > 0) as usize;
        }
    }
    assert!(nonzero > 20);
}

#[test]
fn generated_members_contain_small_edges_and_grow_correctly() {
    let members = generate_all_b(10).unwrap();
    assert_eq!(generate_all_b(4).unwrap().len(), 2);
    for m in &members {
        let h = &m.hypergraph;
        assert!(h.edges().iter().any(|e| e.len() == 2 || e.len() == 3));
        let kinds = m.certificate.kinds();
        let a = kinds.matches('A').count();
        let bc = kinds.matches(['B', 'C']).count();
        let d = kinds.matches('D').count();
        assert_eq!(h.n(), 2 * a + 2 * bc + d);
        assert_eq!(d + 1, a);
    }
}

#[test]
fn recognizer_rejects_near_misses() {
    let rec = Recognizer::new();
    let members = generate_all_b(9).unwrap();
    let forms: HashSet<CanonicalForm> = members.iter().map(|m| canonical_form(&m.hypergraph)).collect();
    // Dropping or adding an edge must leave the family unless the result
    // happens to be isomorphic to a member.
    for m in &members {
        let h = &m.hypergraph;
        for j in 0..h.m() {
            let g = h.remove_edge(j).unwrap();
            let inside = rec.recognize(&g).unwrap().is_some();
            assert_eq!(inside, forms.contains(&canonical_form(&g)), "{g}");
        }
    }
}
