//! Canonical forms for small hypergraphs.
//!
//! Each component is canonicalised independently by colour refinement on the
//! vertex/edge incidence structure followed by an exhaustive
//! individualisation search; the component forms are then sorted and
//! concatenated. Two hypergraphs are isomorphic iff their forms are equal.
//! The search is exact but exponential in the worst case, which is fine for
//! the instance sizes this crate targets (a few dozen vertices).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<Vec<u32>>,
}

impl CanonicalForm {
    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(
            self.n,
            self.edges.iter().map(|e| e.iter().map(|&v| v as usize)),
        )
        .expect("canonical form is a valid hypergraph")
    }

    /// Isomorphism-invariant digest.
    pub fn digest(&self) -> String {
        let mut text = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(u32::to_string).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

pub fn canonical_form(h: &Hypergraph) -> CanonicalForm {
    canonical_labeling(h).0
}

/// Returns the canonical form and a permutation `perm` (old vertex to new
/// vertex) with `h.relabel(&perm)` equal to the form.
pub fn canonical_labeling(h: &Hypergraph) -> (CanonicalForm, Vec<Vertex>) {
    let comps = h.components();
    if comps.len() == 1 {
        return canonical_connected(&comps[0].hypergraph);
    }
    let mut parts: Vec<(CanonicalForm, Vec<Vertex>, Vec<Vertex>)> = comps
        .into_iter()
        .map(|c| {
            let (form, perm) = canonical_connected(&c.hypergraph);
            (form, perm, c.vertices)
        })
        .collect();
    parts.sort_by(|a, b| a.0.cmp(&b.0));

    let mut perm = vec![0; h.n()];
    let mut edges = Vec::with_capacity(h.m());
    let mut offset = 0;
    for (form, local, vertices) in &parts {
        for (i, &old) in vertices.iter().enumerate() {
            perm[old] = offset + local[i];
        }
        edges.extend(
            form.edges
                .iter()
                .map(|e| e.iter().map(|&v| v + offset as u32).collect::<Vec<_>>()),
        );
        offset += form.n;
    }
    edges.sort();
    (CanonicalForm { n: h.n(), edges }, perm)
}

pub fn is_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    canonical_form(a) == canonical_form(b)
}

struct Incidence<'a> {
    h: &'a Hypergraph,
    /// Neighbours in the bipartite incidence graph; edge `j` is node `n + j`.
    adj: Vec<Vec<usize>>,
}

struct Best {
    edges: Vec<Vec<u32>>,
    perm: Vec<Vertex>,
}

fn canonical_connected(h: &Hypergraph) -> (CanonicalForm, Vec<Vertex>) {
    let n = h.n();
    let mut adj = vec![Vec::new(); n + h.m()];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e {
            adj[v].push(n + j);
            adj[n + j].push(v);
        }
    }
    let inc = Incidence { h, adj };
    // Vertices start with colour 0, edges with 1 + size.
    let colors: Vec<u32> = (0..n)
        .map(|_| 0)
        .chain(h.edges().iter().map(|e| 1 + e.len() as u32))
        .collect();
    let mut best = None;
    search(&inc, colors, &mut best);
    let best = best.expect("search visits at least one leaf");
    (
        CanonicalForm {
            n,
            edges: best.edges,
        },
        best.perm,
    )
}

/// Refines `colors` to the coarsest equitable partition finer than it.
/// Colours are re-ranked by sorted signature so the result is invariant.
fn refine(inc: &Incidence, colors: &mut [u32]) {
    let mut classes = count_distinct(colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..colors.len())
            .map(|i| {
                let mut nb: Vec<u32> = inc.adj[i].iter().map(|&j| colors[j]).collect();
                nb.sort_unstable();
                (colors[i], nb)
            })
            .collect();
        let mut sorted: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        for (i, sig) in sigs.iter().enumerate() {
            colors[i] = sorted.binary_search(&sig).expect("signature present") as u32;
        }
        let now = sorted.len();
        if now == classes {
            break;
        }
        classes = now;
    }
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(inc: &Incidence, mut colors: Vec<u32>, best: &mut Option<Best>) {
    refine(inc, &mut colors);
    let n = inc.h.n();

    // Target cell: the non-singleton vertex cell with the smallest colour.
    let mut by_color: Vec<(u32, Vertex)> = (0..n).map(|v| (colors[v], v)).collect();
    by_color.sort_unstable();
    let mut target: Option<&[(u32, Vertex)]> = None;
    let mut i = 0;
    while i < by_color.len() {
        let mut j = i + 1;
        while j < by_color.len() && by_color[j].0 == by_color[i].0 {
            j += 1;
        }
        if j - i > 1 {
            target = Some(&by_color[i..j]);
            break;
        }
        i = j;
    }

    let Some(cell) = target else {
        // Discrete: the colour order is the labelling.
        let mut perm = vec![0; n];
        for (rank, &(_, v)) in by_color.iter().enumerate() {
            perm[v] = rank;
        }
        let mut edges: Vec<Vec<u32>> = inc
            .h
            .edges()
            .iter()
            .map(|e| {
                let mut f: Vec<u32> = e.iter().map(|&v| perm[v] as u32).collect();
                f.sort_unstable();
                f
            })
            .collect();
        edges.sort();
        if best.as_ref().is_none_or(|b| edges < b.edges) {
            *best = Some(Best { edges, perm });
        }
        return;
    };

    // Twins (same incident edges) are interchangeable by an automorphism that
    // fixes the current partition, so one representative per twin class is
    // enough.
    let mut tried: Vec<&[usize]> = Vec::new();
    let cell_color = cell[0].0;
    for &(_, v) in cell {
        let incident = inc.adj[v].as_slice();
        if tried.contains(&incident) {
            continue;
        }
        tried.push(incident);
        let next: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(x, &c)| {
                if c == cell_color && x != v {
                    2 * c + 1
                } else {
                    2 * c
                }
            })
            .collect();
        search(inc, next, best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_copies_share_a_form() {
        let h = Hypergraph::new(6, [vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![2, 3, 4, 5]]).unwrap();
        let g = h.relabel(&[5, 3, 1, 0, 2, 4]);
        assert_eq!(canonical_form(&h), canonical_form(&g));
        let (form, perm) = canonical_labeling(&g);
        assert_eq!(g.relabel(&perm), form.to_hypergraph());
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let path = Hypergraph::new(4, [vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let star = Hypergraph::new(4, [vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        assert!(!is_isomorphic(&path, &star));
        // Same degree sequence, different structure: C6 vs two triangles.
        let c6 = Hypergraph::new(6, (0..6).map(|i| vec![i, (i + 1) % 6])).unwrap();
        let tt = Hypergraph::new(
            6,
            [vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap();
        assert!(!is_isomorphic(&c6, &tt));
    }

    #[test]
    fn multiplicity_matters() {
        let once = Hypergraph::new(3, [vec![0, 1], vec![1, 2]]).unwrap();
        let twice = Hypergraph::new(3, [vec![0, 1], vec![0, 1]]).unwrap();
        assert!(!is_isomorphic(&once, &twice));
        let twice_b = Hypergraph::new(3, [vec![1, 2], vec![2, 1]]).unwrap();
        assert!(is_isomorphic(&twice, &twice_b));
    }

    #[test]
    fn disconnected_forms_sort_components() {
        let h2 = Hypergraph::new(2, [vec![0, 1]]).unwrap();
        let h4 = Hypergraph::new(4, [vec![0, 1, 2, 3]]).unwrap();
        let a = h2.disjoint_union(&h4);
        let b = h4.disjoint_union(&h2);
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let (form, perm) = canonical_labeling(&b);
        assert_eq!(b.relabel(&perm), form.to_hypergraph());
    }

    #[test]
    fn many_identical_components_stay_cheap() {
        let h2 = Hypergraph::new(2, [vec![0, 1]]).unwrap();
        let mut h = Hypergraph::empty(0);
        for _ in 0..12 {
            h = h.disjoint_union(&h2);
        }
        assert_eq!(canonical_form(&h).edges.len(), 12);
    }
}
