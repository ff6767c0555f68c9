//! Exact minimum transversals.
//!
//! Two independent engines compute `τ(H)`: [`tau_bruteforce`] enumerates
//! vertex subsets in size order, and [`Solver`] runs a branch-and-bound over
//! edge bitmasks. The brute-force engine is the reference oracle for the
//! branch-and-bound and shares no search code with it.

use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{mask_of, mask_vertices, Hypergraph, Reduction, Transversal, Vertex, VertexMask};

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const NODE_BUDGET_ENV: &str = "TRANSVERSAL_LAB_NODE_BUDGET";
/// Hard cap on `n` for [`tau_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub tau: usize,
    pub witness: Transversal,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    pub must_include: Vec<Vertex>,
    pub forbidden: Vec<Vertex>,
}

impl Constraints {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn include(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        Constraints {
            must_include: vertices.into_iter().collect(),
            forbidden: Vec::new(),
        }
    }

    pub fn forbid(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        Constraints {
            must_include: Vec::new(),
            forbidden: vertices.into_iter().collect(),
        }
    }

    /// Validates against `h` and returns `(include, forbid)` masks.
    fn masks(&self, h: &Hypergraph) -> Result<(VertexMask, VertexMask)> {
        for &v in self.must_include.iter().chain(&self.forbidden) {
            if v >= h.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
            }
        }
        let include = mask_of(&self.must_include);
        let forbid = mask_of(&self.forbidden);
        if include & forbid != 0 {
            return Err(Error::Precondition(format!(
                "vertices {:?} are both required and forbidden",
                mask_vertices(include & forbid)
            )));
        }
        Ok((include, forbid))
    }
}

/// Branch-and-bound transversal solver.
///
/// Branches on the vertices of a smallest unhit edge, excluding earlier
/// siblings from later branches. Bounds with the better of a disjoint-edge
/// packing and a degree-sum bound. Each node first applies forced vertices
/// (edges reduced to one vertex) and removes edges that contain another edge.
#[derive(Clone, Debug)]
pub struct Solver {
    node_budget: u64,
    canonical: bool,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            node_budget: DEFAULT_NODE_BUDGET,
            canonical: false,
        }
    }
}

impl Solver {
    pub fn new() -> Self {
        Self::default()
    }

    /// Default solver with the node budget taken from
    /// `TRANSVERSAL_LAB_NODE_BUDGET` when set.
    pub fn from_env() -> Self {
        let budget = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_NODE_BUDGET);
        Solver::new().node_budget(budget)
    }

    pub fn node_budget(mut self, budget: u64) -> Self {
        self.node_budget = budget;
        self
    }

    /// Return the lexicographically smallest minimum transversal.
    pub fn canonical(mut self, canonical: bool) -> Self {
        self.canonical = canonical;
        self
    }

    pub fn solve(&self, h: &Hypergraph) -> Result<SolveResult> {
        self.solve_constrained(h, &Constraints::none())
    }

    /// Minimum transversal among those containing `must_include` and avoiding
    /// `forbidden`.
    pub fn solve_constrained(&self, h: &Hypergraph, constraints: &Constraints) -> Result<SolveResult> {
        let start = Instant::now();
        let edges = h.edge_masks()?;
        let (include, forbid) = constraints.masks(h)?;
        let mut search = Search::new(self.node_budget);
        let (size, set) = search
            .minimum(&edges, include, forbid)?
            .ok_or_else(|| Error::Infeasible(first_dead_edge(&edges, include, forbid)))?;
        let set = if self.canonical {
            search.lex_smallest(&edges, include, forbid, size)?
        } else {
            set
        };
        let witness = Transversal::certify(h, mask_vertices(set)).expect("solver produced a transversal");
        debug_assert_eq!(witness.len(), size);
        Ok(SolveResult {
            tau: size,
            witness,
            stats: SolveStats {
                nodes: search.nodes,
                elapsed_us: start.elapsed().as_micros() as u64,
            },
        })
    }

    /// Among all minimum transversals of `h`, one that meets every target
    /// pair; `None` when no minimum transversal does.
    pub fn solve_with_pair_targets(
        &self,
        h: &Hypergraph,
        targets: &[(Vertex, Vertex)],
    ) -> Result<Option<SolveResult>> {
        if targets.is_empty() || targets.len() > 3 {
            return Err(Error::Precondition(format!(
                "expected 1 to 3 target pairs, got {}",
                targets.len()
            )));
        }
        for &(s, t) in targets {
            for v in [s, t] {
                if v >= h.n() {
                    return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
                }
            }
            if s == t {
                return Err(Error::Precondition(format!("target {{{s},{t}}} is not a pair")));
            }
        }
        let base = self.solve(h)?;
        // A τ-set meets every target iff τ of H plus the targets as 2-edges
        // is still τ(H).
        let mut augmented = h.clone();
        for &(s, t) in targets {
            augmented = augmented.add_edge(&[s, t])?;
        }
        let aug = self.solve(&augmented)?;
        if aug.tau > base.tau {
            return Ok(None);
        }
        let witness = Transversal::certify(h, aug.witness.vertices).expect("superset instance witness");
        Ok(Some(SolveResult {
            tau: aug.tau,
            witness,
            stats: SolveStats {
                nodes: base.stats.nodes + aug.stats.nodes,
                elapsed_us: base.stats.elapsed_us + aug.stats.elapsed_us,
            },
        }))
    }
}

fn first_dead_edge(edges: &[VertexMask], include: VertexMask, forbid: VertexMask) -> usize {
    edges
        .iter()
        .position(|&e| e & include == 0 && e & !forbid == 0)
        .unwrap_or(0)
}

struct Search {
    nodes: u64,
    budget: u64,
    best_size: usize,
    best_set: VertexMask,
}

impl Search {
    fn new(budget: u64) -> Self {
        Search {
            nodes: 0,
            budget,
            best_size: usize::MAX,
            best_set: 0,
        }
    }

    /// Minimum transversal containing `include` and avoiding `forbid`;
    /// `None` when the constraints kill an edge.
    fn minimum(
        &mut self,
        edges: &[VertexMask],
        include: VertexMask,
        forbid: VertexMask,
    ) -> Result<Option<(usize, VertexMask)>> {
        let mut rest = Vec::with_capacity(edges.len());
        for &e in edges {
            if e & include != 0 {
                continue;
            }
            let e = e & !forbid;
            if e == 0 {
                return Ok(None);
            }
            rest.push(e);
        }
        let (g_size, g_set) = greedy_cover(&rest);
        self.best_size = g_size + 1;
        self.best_set = 0;
        self.node(rest, 0, 0)?;
        if self.best_set == 0 && self.best_size == g_size + 1 {
            self.best_size = g_size;
            self.best_set = g_set;
        }
        let base = include.count_ones() as usize;
        Ok(Some((base + self.best_size, include | self.best_set)))
    }

    fn node(&mut self, mut edges: Vec<VertexMask>, mut chosen: VertexMask, mut count: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::InstanceTooHard(self.budget));
        }
        // Forced vertices.
        while let Some(&single) = edges.iter().find(|e| e.count_ones() == 1) {
            chosen |= single;
            count += 1;
            edges.retain(|&e| e & single == 0);
        }
        if count >= self.best_size {
            return Ok(());
        }
        if edges.is_empty() {
            self.best_size = count;
            self.best_set = chosen;
            return Ok(());
        }
        let edges = drop_supersets(edges);
        if count + lower_bound(&edges) >= self.best_size {
            return Ok(());
        }

        let degree = |v: u32| edges.iter().filter(|&&e| e >> v & 1 == 1).count();
        let pivot = *edges
            .iter()
            .min_by_key(|&&e| {
                let weight: usize = mask_vertices(e).into_iter().map(|v| degree(v as u32)).sum();
                (e.count_ones(), std::cmp::Reverse(weight))
            })
            .expect("nonempty");
        let mut order = mask_vertices(pivot);
        order.sort_by_key(|&v| std::cmp::Reverse(degree(v as u32)));

        let mut excluded: VertexMask = 0;
        for v in order {
            if count + 1 >= self.best_size {
                break;
            }
            let bit = 1u128 << v;
            let mut next = Vec::with_capacity(edges.len());
            let mut dead = false;
            for &e in &edges {
                if e & bit != 0 {
                    continue;
                }
                let e = e & !excluded;
                if e == 0 {
                    dead = true;
                    break;
                }
                next.push(e);
            }
            if dead {
                break;
            }
            self.node(next, chosen | bit, count + 1)?;
            excluded |= bit;
        }
        Ok(())
    }

    /// Lexicographically smallest transversal of size `size` under the
    /// constraints: fixes vertices greedily in ascending order.
    fn lex_smallest(
        &mut self,
        edges: &[VertexMask],
        include: VertexMask,
        forbid: VertexMask,
        size: usize,
    ) -> Result<VertexMask> {
        let mut include = include;
        let mut forbid = forbid;
        let n = edges.iter().fold(include, |a, &e| a | e);
        for v in mask_vertices(n) {
            if edges.iter().all(|&e| e & include != 0) {
                break;
            }
            let bit = 1u128 << v;
            if include & bit != 0 || forbid & bit != 0 {
                continue;
            }
            let mut probe = Search::new(self.budget.saturating_sub(self.nodes));
            let ok = matches!(probe.minimum(edges, include | bit, forbid)?, Some((s, _)) if s == size);
            self.nodes += probe.nodes;
            if ok {
                include |= bit;
            } else {
                forbid |= bit;
            }
        }
        Ok(include)
    }
}

fn greedy_cover(edges: &[VertexMask]) -> (usize, VertexMask) {
    let mut rest = edges.to_vec();
    let mut set = 0;
    let mut size = 0;
    while !rest.is_empty() {
        let all = rest.iter().fold(0, |a, &e| a | e);
        let v = mask_vertices(all)
            .into_iter()
            .max_by_key(|&v| (rest.iter().filter(|&&e| e >> v & 1 == 1).count(), std::cmp::Reverse(v)))
            .expect("nonempty");
        set |= 1u128 << v;
        size += 1;
        rest.retain(|&e| e >> v & 1 == 0);
    }
    (size, set)
}

/// Keeps one copy of every edge that contains no other edge.
fn drop_supersets(mut edges: Vec<VertexMask>) -> Vec<VertexMask> {
    edges.sort_unstable_by_key(|e| (e.count_ones(), *e));
    edges.dedup();
    let mut kept: Vec<VertexMask> = Vec::with_capacity(edges.len());
    for e in edges {
        if !kept.iter().any(|&k| k & !e == 0) {
            kept.push(e);
        }
    }
    kept
}

/// Max of a greedy disjoint-edge packing and the degree-sum bound. `edges`
/// must be sorted by size (as [`drop_supersets`] leaves them).
fn lower_bound(edges: &[VertexMask]) -> usize {
    let mut used = 0;
    let mut packing = 0;
    for &e in edges {
        if e & used == 0 {
            used |= e;
            packing += 1;
        }
    }
    let all = edges.iter().fold(0, |a, &e| a | e);
    let mut degrees: Vec<usize> = mask_vertices(all)
        .into_iter()
        .map(|v| edges.iter().filter(|&&e| e >> v & 1 == 1).count())
        .collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let mut covered = 0;
    let mut by_degree = 0;
    for d in degrees {
        if covered >= edges.len() {
            break;
        }
        covered += d;
        by_degree += 1;
    }
    packing.max(by_degree)
}

pub fn tau_bnb(h: &Hypergraph, constraints: &Constraints) -> Result<SolveResult> {
    Solver::from_env().solve_constrained(h, constraints)
}

pub fn tau_with_pair_targets(h: &Hypergraph, targets: &[(Vertex, Vertex)]) -> Result<Option<SolveResult>> {
    Solver::from_env().solve_with_pair_targets(h, targets)
}

/// `τ(H)` via branch-and-bound with the default budget.
pub fn tau(h: &Hypergraph) -> Result<usize> {
    Ok(Solver::from_env().solve(h)?.tau)
}

/// Reference oracle: tries vertex subsets in order of size, and
/// lexicographically within a size, so the witness is the lexicographically
/// smallest minimum transversal.
pub fn tau_bruteforce(h: &Hypergraph) -> Result<SolveResult> {
    tau_bruteforce_constrained(h, &Constraints::none())
}

pub fn tau_bruteforce_constrained(h: &Hypergraph, constraints: &Constraints) -> Result<SolveResult> {
    if h.n() > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            n: h.n(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let start = Instant::now();
    for &v in constraints.must_include.iter().chain(&constraints.forbidden) {
        if v >= h.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
        }
    }
    let must: Vec<Vertex> = constraints.must_include.iter().copied().sorted().dedup().collect();
    if must.iter().any(|v| constraints.forbidden.contains(v)) {
        return Err(Error::Precondition("a vertex is both required and forbidden".into()));
    }
    let free: Vec<Vertex> = (0..h.n())
        .filter(|v| !must.contains(v) && !constraints.forbidden.contains(v))
        .collect();
    let mut tried = 0u64;
    for k in 0..=free.len() {
        for extra in free.iter().copied().combinations(k) {
            tried += 1;
            let mut set = must.clone();
            set.extend(extra);
            set.sort_unstable();
            if h.is_transversal(&set) {
                let tau = set.len();
                return Ok(SolveResult {
                    tau,
                    witness: Transversal::certify(h, set).expect("checked above"),
                    stats: SolveStats {
                        nodes: tried,
                        elapsed_us: start.elapsed().as_micros() as u64,
                    },
                });
            }
        }
    }
    let dead = h
        .edges()
        .iter()
        .position(|e| e.iter().all(|v| constraints.forbidden.contains(v)))
        .unwrap_or(0);
    Err(Error::Infeasible(dead))
}

/// Output of [`greedy_peel`].
#[derive(Clone, Debug)]
pub struct Peel {
    /// Removed vertices in the order they were picked.
    pub removed: Vec<Vertex>,
    /// `H(X, ∅)` with its vertex map.
    pub remainder: Reduction,
}

/// Repeatedly removes a maximum-degree vertex (lowest index on ties) and its
/// edges while the maximum degree is at least `threshold`.
pub fn greedy_peel(h: &Hypergraph, threshold: usize) -> Result<Peel> {
    if threshold == 0 {
        return Err(Error::Precondition("degree threshold must be at least 1".into()));
    }
    let mut alive = vec![true; h.m()];
    let mut removed = Vec::new();
    loop {
        let mut deg = vec![0usize; h.n()];
        for (e, _) in h.edges().iter().zip(&alive).filter(|(_, &a)| a) {
            for &v in e {
                deg[v] += 1;
            }
        }
        let Some((v, &d)) = deg.iter().enumerate().max_by_key(|&(v, &d)| (d, std::cmp::Reverse(v))) else {
            break;
        };
        if d < threshold {
            break;
        }
        removed.push(v);
        for (e, a) in h.edges().iter().zip(alive.iter_mut()) {
            if e.contains(&v) {
                *a = false;
            }
        }
    }
    let remainder = h.reduce(&removed, &[])?;
    Ok(Peel { removed, remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2() -> Hypergraph {
        Hypergraph::new(2, [vec![0, 1]]).unwrap()
    }

    fn h6() -> Hypergraph {
        Hypergraph::new(6, [vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![2, 3, 4, 5]]).unwrap()
    }

    fn h8() -> Hypergraph {
        let pairs = [[0, 1], [2, 3], [4, 5], [6, 7]];
        let edges = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .map(|(i, j)| vec![pairs[i][0], pairs[i][1], pairs[j][0], pairs[j][1]]);
        Hypergraph::new(8, edges).unwrap()
    }

    #[test]
    fn bruteforce_examples() {
        let r = tau_bruteforce(&h2()).unwrap();
        assert_eq!((r.tau, r.witness.vertices.clone()), (1, vec![0]));
        assert_eq!(tau_bruteforce(&h6()).unwrap().tau, 2);
        assert!(matches!(
            tau_bruteforce(&Hypergraph::empty(25)),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn bnb_examples() {
        assert_eq!(tau_bnb(&h8(), &Constraints::none()).unwrap().tau, 3);
        let r = tau_bnb(&h6(), &Constraints::include([0, 2])).unwrap();
        assert_eq!(r.tau, 2);
        assert_eq!(r.witness.vertices, vec![0, 2]);
        assert!(matches!(
            tau_bnb(&h2(), &Constraints::forbid([0, 1])),
            Err(Error::Infeasible(0))
        ));
        assert!(matches!(
            tau_bnb(&h2(), &Constraints { must_include: vec![0], forbidden: vec![0] }),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empty_instance_has_tau_zero() {
        let r = Solver::new().solve(&Hypergraph::empty(3)).unwrap();
        assert_eq!(r.tau, 0);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn canonical_witness_matches_bruteforce() {
        for h in [h2(), h6(), h8()] {
            let a = Solver::new().canonical(true).solve(&h).unwrap();
            let b = tau_bruteforce(&h).unwrap();
            assert_eq!(a.witness, b.witness);
        }
    }

    #[test]
    fn node_budget_is_enforced() {
        let err = Solver::new().node_budget(0).solve(&h8()).unwrap_err();
        assert_eq!(err, Error::InstanceTooHard(0));
    }

    #[test]
    fn pair_target_examples() {
        let r = tau_with_pair_targets(&h2(), &[(0, 1)]).unwrap().unwrap();
        assert_eq!(r.witness.vertices, vec![0]);
        // B(H2) with A-pair {0,1}: some τ-set meets the pair.
        let b4 = Hypergraph::new(4, [vec![0, 1, 2], vec![0, 1, 3], vec![2, 3]]).unwrap();
        let r = tau_with_pair_targets(&b4, &[(0, 1)]).unwrap().unwrap();
        assert_eq!(r.tau, 2);
        assert!(r.witness.vertices.iter().any(|&v| v <= 1));
        // Two disjoint 2-edges: τ-sets take one vertex from each, so the pair
        // {0,1} plus {2,3} plus a cross pair are all met, but nothing meets
        // a pair of vertices outside the edges.
        let g = Hypergraph::new(5, [vec![0, 1], vec![2, 3]]).unwrap();
        assert!(tau_with_pair_targets(&g, &[(0, 1), (2, 3), (1, 2)]).unwrap().is_some());
        assert!(tau_with_pair_targets(&g, &[(4, 4)]).is_err());
        let g = Hypergraph::new(6, [vec![0, 1], vec![2, 3]]).unwrap();
        assert!(tau_with_pair_targets(&g, &[(4, 5)]).unwrap().is_none());
    }

    #[test]
    fn peel_examples() {
        let p = greedy_peel(&h8(), 4).unwrap();
        assert!(p.removed.is_empty());
        assert_eq!(p.remainder.hypergraph, h8());

        let star = Hypergraph::new(6, (1..6).map(|i| vec![0, i])).unwrap();
        let p = greedy_peel(&star, 4).unwrap();
        assert_eq!(p.removed, vec![0]);
        assert_eq!(p.remainder.hypergraph.m(), 0);

        assert!(greedy_peel(&star, 0).is_err());
    }
}
