//! The hypergraph instance model.
//!
//! A [`Hypergraph`] is a vertex count together with an ordered multiset of
//! edges. Vertices are contiguous indices `0..n`; every edge is stored as an
//! ascending list of distinct vertices. Equal edges may appear more than once
//! and every query counts them with multiplicity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Bitmask over vertex indices, used by the exact solvers.
pub type VertexMask = u128;

/// Largest vertex count representable by a [`VertexMask`].
pub const MASK_CAPACITY: usize = 128;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// A component of a hypergraph together with the maps back into its parent.
#[derive(Clone, Debug)]
pub struct Component {
    pub hypergraph: Hypergraph,
    /// `vertices[i]` is the parent index of component vertex `i`.
    pub vertices: Vec<Vertex>,
    /// `edges[j]` is the parent index of component edge `j`.
    pub edges: Vec<usize>,
}

/// Result of `H(X, Y)`: the reduced hypergraph and the old-to-new vertex map.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub hypergraph: Hypergraph,
    pub vertex_map: Vec<Option<Vertex>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge. Fails on out-of-range vertices,
    /// repeated vertices within an edge, or empty edges.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = Vertex>,
    {
        let mut out = Vec::new();
        for (i, e) in edges.into_iter().enumerate() {
            let mut edge: Vec<Vertex> = e.into_iter().collect();
            if edge.is_empty() {
                return Err(Error::EmptyEdge(i));
            }
            edge.sort_unstable();
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex(i));
            }
            if let Some(&v) = edge.last() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            out.push(edge);
        }
        Ok(Hypergraph {
            n,
            edges: out,
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<&[Vertex]> {
        self.edges
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::EdgeIndexOutOfRange {
                index,
                m: self.m(),
            })
    }

    /// Number of edges of size exactly `size` (`e_i(H)`).
    pub fn edges_of_size(&self, size: usize) -> usize {
        self.edges.iter().filter(|e| e.len() == size).count()
    }

    pub fn has_edge(&self, edge: &[Vertex]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn position_of_edge(&self, edge: &[Vertex]) -> Option<usize> {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.iter().position(|f| *f == e)
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(&v)).count())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| e.len() == k)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.degrees().into_iter().all(|x| x == d)
    }

    /// Every two edges share at most one vertex.
    pub fn is_linear(&self) -> bool {
        (0..self.m()).all(|i| (i + 1..self.m()).all(|j| intersection_size(&self.edges[i], &self.edges[j]) <= 1))
    }

    /// Two distinct edges overlap when they share at least two vertices.
    pub fn overlap(&self, e1: usize, e2: usize) -> Result<bool> {
        if e1 == e2 {
            return Err(Error::SameEdge(e1));
        }
        let a = self.edge(e1)?;
        let b = self.edge(e2)?;
        Ok(intersection_size(a, b) >= 2)
    }

    pub fn is_transversal(&self, set: &[Vertex]) -> bool {
        self.edges.iter().all(|e| e.iter().any(|v| set.contains(v)))
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Connected components in order of their smallest vertex. Isolated
    /// vertices become singleton components with no edges.
    pub fn components(&self) -> Vec<Component> {
        let mut dsu = Dsu::new(self.n);
        for e in &self.edges {
            for w in e.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let mut root_slot = vec![usize::MAX; self.n];
        let mut comps: Vec<(Vec<Vertex>, Vec<usize>)> = Vec::new();
        for v in 0..self.n {
            let r = dsu.find(v);
            if root_slot[r] == usize::MAX {
                root_slot[r] = comps.len();
                comps.push((Vec::new(), Vec::new()));
            }
            comps[root_slot[r]].0.push(v);
        }
        for (i, e) in self.edges.iter().enumerate() {
            let slot = root_slot[dsu.find(e[0])];
            comps[slot].1.push(i);
        }
        comps
            .into_iter()
            .map(|(vs, es)| self.sub_hypergraph(&vs, &es))
            .collect()
    }

    /// The sub-hypergraph on `vertices` (ascending) with the listed edges,
    /// relabelled to `0..vertices.len()`. Every listed edge must lie inside
    /// `vertices`.
    pub fn sub_hypergraph(&self, vertices: &[Vertex], edge_indices: &[usize]) -> Component {
        let mut map = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            map[v] = i;
        }
        let edges = edge_indices
            .iter()
            .map(|&j| {
                let mut e: Vec<Vertex> = self.edges[j].iter().map(|&v| map[v]).collect();
                debug_assert!(e.iter().all(|&v| v != usize::MAX));
                e.sort_unstable();
                e
            })
            .collect();
        Component {
            hypergraph: Hypergraph {
                n: vertices.len(),
                edges,
                labels: self
                    .labels
                    .as_ref()
                    .map(|l| vertices.iter().map(|&v| l[v].clone()).collect()),
            },
            vertices: vertices.to_vec(),
            edges: edge_indices.to_vec(),
        }
    }

    /// `H(X, Y)`: delete the vertices of `X ∪ Y`, drop every edge meeting `X`
    /// and strip `Y` from the remaining edges. Vertices outside `X ∪ Y` are
    /// kept even if they end up isolated.
    pub fn reduce(&self, x: &[Vertex], y: &[Vertex]) -> Result<Reduction> {
        let mut in_x = vec![false; self.n];
        let mut gone = vec![false; self.n];
        for &v in x {
            self.check_vertex(v)?;
            in_x[v] = true;
            gone[v] = true;
        }
        for &v in y {
            self.check_vertex(v)?;
            gone[v] = true;
        }
        let mut vertex_map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                vertex_map[v] = Some(next);
                next += 1;
            }
        }
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.iter().any(|&v| in_x[v]) {
                continue;
            }
            let stripped: Vec<Vertex> = e.iter().filter_map(|&v| vertex_map[v]).collect();
            if stripped.is_empty() {
                return Err(Error::ZeroEdge(i));
            }
            edges.push(stripped);
        }
        Ok(Reduction {
            hypergraph: Hypergraph {
                n: next,
                edges,
                labels: self.labels.as_ref().map(|l| {
                    (0..self.n)
                        .filter(|&v| !gone[v])
                        .map(|v| l[v].clone())
                        .collect()
                }),
            },
            vertex_map,
        })
    }

    /// Removes every edge that contains another edge. Of several equal edges
    /// exactly one copy (the first) survives. Edge order is otherwise kept.
    pub fn subset_edge_cleanup(&self) -> Hypergraph {
        let mut keep = vec![true; self.m()];
        for i in 0..self.m() {
            for j in 0..self.m() {
                if i == j || !keep[j] {
                    continue;
                }
                let (f, e) = (&self.edges[i], &self.edges[j]);
                if is_subset(e, f) && (e.len() < f.len() || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
        Hypergraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(e, _)| e.clone())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Removes isolated vertices; returns the new hypergraph and the new-to-old map.
    pub fn drop_isolated(&self) -> (Hypergraph, Vec<Vertex>) {
        let deg = self.degrees();
        let kept: Vec<Vertex> = (0..self.n).filter(|&v| deg[v] > 0).collect();
        let all: Vec<usize> = (0..self.m()).collect();
        let c = self.sub_hypergraph(&kept, &all);
        (c.hypergraph, kept)
    }

    pub fn remove_edge(&self, index: usize) -> Result<Hypergraph> {
        self.edge(index)?;
        let mut h = self.clone();
        h.edges.remove(index);
        Ok(h)
    }

    pub fn add_edge(&self, edge: &[Vertex]) -> Result<Hypergraph> {
        let mut edges = self.edges.clone();
        edges.push(edge.to_vec());
        let mut h = Hypergraph::new(self.n, edges)?;
        h.labels = self.labels.clone();
        Ok(h)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| e.iter().map(|&v| v + shift).collect()));
        Hypergraph {
            n: self.n + other.n,
            edges,
            labels: None,
        }
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n, "permutation length");
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let mut f: Vec<Vertex> = e.iter().map(|&v| perm[v]).collect();
                f.sort_unstable();
                f
            })
            .collect();
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); self.n];
            for (v, name) in l.iter().enumerate() {
                out[perm[v]] = name.clone();
            }
            out
        });
        Hypergraph {
            n: self.n,
            edges,
            labels,
        }
    }

    /// Edges sorted lexicographically; the form used for equality and digests.
    pub fn sorted_edges(&self) -> Vec<Vec<Vertex>> {
        let mut e = self.edges.clone();
        e.sort();
        e
    }

    pub fn edge_masks(&self) -> Result<Vec<VertexMask>> {
        if self.n > MASK_CAPACITY {
            return Err(Error::InstanceTooLarge {
                n: self.n,
                limit: MASK_CAPACITY,
            });
        }
        Ok(self.edges.iter().map(|e| mask_of(e)).collect())
    }

    /// SHA-256 over the canonical text form (labels ignored). Two hypergraphs
    /// share a digest iff they compare equal.
    pub fn digest(&self) -> String {
        let mut text = format!("{} {}\n", self.n, self.m());
        for e in self.sorted_edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            text.push_str(&line.join(" "));
            text.push('\n');
        }
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Hypergraph {}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H(n={}, m={}; ", self.n, self.m())?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let names: Vec<String> = e.iter().map(|&v| self.vertex_name(v)).collect();
            write!(f, "{{{}}}", names.join(","))?;
        }
        write!(f, ")")
    }
}

/// A vertex set certified to hit every edge of one specific hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversal {
    pub vertices: Vec<Vertex>,
    pub instance_digest: String,
}

impl Transversal {
    /// Certifies `vertices` against `h`; `None` if some edge is missed.
    pub fn certify(h: &Hypergraph, vertices: impl IntoIterator<Item = Vertex>) -> Option<Self> {
        let set: BTreeSet<Vertex> = vertices.into_iter().collect();
        let vertices: Vec<Vertex> = set.into_iter().collect();
        if vertices.iter().any(|&v| v >= h.n()) || !h.is_transversal(&vertices) {
            return None;
        }
        Some(Transversal {
            vertices,
            instance_digest: h.digest(),
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True when this transversal was issued for `h` and still hits every edge.
    pub fn is_valid_for(&self, h: &Hypergraph) -> bool {
        self.instance_digest == h.digest() && h.is_transversal(&self.vertices)
    }
}

pub fn mask_of(vertices: &[Vertex]) -> VertexMask {
    vertices.iter().fold(0, |m, &v| m | (1u128 << v))
}

pub fn mask_vertices(mut mask: VertexMask) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        out.push(v);
        mask &= mask - 1;
    }
    out
}

pub(crate) fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub(crate) fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    small.len() <= big.len() && intersection_size(small, big) == small.len()
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
