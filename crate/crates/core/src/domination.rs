//! Total domination through open neighbourhood hypergraphs.
//!
//! The open neighbourhood hypergraph (ONH) of a graph `G` has the vertices of
//! `G` and one edge `N(x)` per vertex `x`. A set totally dominates `G` exactly
//! when it hits every open neighbourhood, so `γₜ(G) = τ(ONH(G))`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Clause, TheoremId};
use crate::canon::is_isomorphic;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Transversal, Vertex};
use crate::solver::{greedy_peel, Solver};

/// Simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::InvalidGraph(format!("parallel edge {{{u},{v}}}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edge_list(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n)
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs_colors(0).iter().all(Option::is_some)
    }

    /// Whether every component is 2-colourable.
    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].expect("coloured");
                for &v in &self.adj[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    fn bfs_colors(&self, s: Vertex) -> Vec<Option<bool>> {
        let mut color = vec![None; self.n];
        color[s] = Some(false);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if color[v].is_none() {
                    color[v] = Some(!color[u].expect("visited"));
                    queue.push_back(v);
                }
            }
        }
        color
    }

    /// The graph as a 2-uniform hypergraph, for isomorphism tests.
    pub fn as_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.n, self.edge_list().into_iter().map(|(u, v)| vec![u, v]))
            .expect("graph edges are valid")
    }

    pub fn is_total_dominating(&self, set: &[Vertex]) -> bool {
        let mut inside = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return false;
            }
            inside[v] = true;
        }
        (0..self.n).all(|v| self.adj[v].iter().any(|&u| inside[u]))
    }
}

/// Open neighbourhood hypergraph: edge `x` is `N(x)`.
pub fn onh(g: &Graph) -> Result<Hypergraph> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    Hypergraph::new(g.n(), (0..g.n()).map(|v| g.neighbors(v).to_vec()))
}

/// `γₜ(G)` and a minimum total dominating set.
pub fn total_domination(g: &Graph, solver: &Solver) -> Result<(usize, Transversal)> {
    let r = solver.solve(&onh(g)?)?;
    Ok((r.tau, r.witness))
}

pub fn gamma_t(g: &Graph) -> Result<usize> {
    Ok(total_domination(g, &Solver::from_env())?.0)
}

/// Hard cap on `n` for [`gamma_t_bruteforce`].
pub const GAMMA_T_BRUTE_FORCE_LIMIT: usize = 24;

/// `γₜ(G)` by checking vertex subsets in size order against the definition,
/// without building the ONH.
pub fn gamma_t_bruteforce(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > GAMMA_T_BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            n,
            limit: GAMMA_T_BRUTE_FORCE_LIMIT,
        });
    }
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    for k in 0..=n {
        for set in (0..n).combinations(k) {
            let s = set.iter().fold(0u32, |m, &u| m | 1 << u);
            if nbr.iter().all(|&a| a & s != 0) {
                return Ok(k);
            }
        }
    }
    unreachable!("V(G) totally dominates a graph without isolated vertices")
}

/// Replaces every edge larger than 4 by a 4-subset: `protect` if it lies in
/// the edge, then the smallest remaining vertices.
pub fn shrink_to_4(h: &Hypergraph, protect: Option<Vertex>) -> Result<Hypergraph> {
    if let Some(p) = protect {
        if p >= h.n() {
            return Err(Error::VertexOutOfRange { vertex: p, n: h.n() });
        }
    }
    let mut edges = Vec::with_capacity(h.m());
    for (j, e) in h.edges().iter().enumerate() {
        if e.len() < 4 {
            return Err(Error::EdgeTooSmall {
                index: j,
                size: e.len(),
                min: 4,
            });
        }
        let mut kept: Vec<Vertex> = Vec::with_capacity(4);
        if let Some(p) = protect.filter(|p| e.contains(p)) {
            kept.push(p);
        }
        kept.extend(e.iter().copied().filter(|&v| Some(v) != protect).take(4 - kept.len()));
        kept.sort_unstable();
        edges.push(kept);
    }
    Hypergraph::new(h.n(), edges)
}

fn require_min_degree_4(g: &Graph) -> Result<()> {
    if g.min_degree() < 4 {
        return Err(Error::HypothesisViolated(format!(
            "minimum degree {} is below 4",
            g.min_degree()
        )));
    }
    Ok(())
}

/// Checks `7γₜ ≤ 3n` exactly. At equality on a connected graph the report
/// records whether `G` is the bipartite complement of the Heawood graph.
pub fn check_3n7(g: &Graph, solver: &Solver) -> Result<BoundReport> {
    require_min_degree_4(g)?;
    let (gt, _) = total_domination(g, solver)?;
    let mut r = BoundReport::new(TheoremId::Td3n7, 7 * gt as u64, 3 * g.n() as u64, gt, g.n(), g.edge_count());
    if r.is_equality() && g.is_connected() {
        let heawood_bc = g.n() == 14 && is_isomorphic(&g.as_hypergraph(), &heawood_bipartite_complement().as_hypergraph());
        r.equality_diagnosis = Some(if heawood_bc {
            "isomorphic to the bipartite complement of the Heawood graph".into()
        } else {
            "connected equality case not isomorphic to the bipartite complement of the Heawood graph".into()
        });
        r.clause = Some(Clause {
            description: "connected equality only for the bipartite complement of the Heawood graph".into(),
            applies: true,
            satisfied: heawood_bc,
        });
    }
    Ok(r)
}

/// Result of [`pipeline_3n7`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pipeline3n7 {
    /// `⌊3n/7⌋`.
    pub bound: usize,
    /// Total dominating set, certified against the ONH.
    pub transversal: Transversal,
    pub protected: Option<Vertex>,
    pub peeled: Vec<Vertex>,
    pub remainder_n: usize,
    pub remainder_m: usize,
    pub remainder_tau: usize,
}

/// Builds a total dominating set of size at most `⌊3n/7⌋` for a graph with
/// minimum degree at least 4: shrink the ONH to a 4-uniform hypergraph
/// (protecting a maximum-degree vertex unless `G` is 4-regular), peel
/// maximum-degree vertices while `Δ ≥ 4`, solve the remainder exactly and
/// add the peeled vertices back.
pub fn pipeline_3n7(g: &Graph, solver: &Solver) -> Result<Pipeline3n7> {
    require_min_degree_4(g)?;
    let h = onh(g)?;
    let protect = (!g.is_regular(4)).then(|| {
        let d = g.max_degree();
        (0..g.n()).find(|&v| g.degree(v) == d).expect("max degree attained")
    });
    let shrunk = shrink_to_4(&h, protect)?;
    let peel = greedy_peel(&shrunk, 4)?;
    let rest = &peel.remainder.hypergraph;
    let solved = solver.solve(rest)?;
    let t2 = BoundReport::new(
        TheoremId::T2QuarterSixth,
        12 * solved.tau as u64,
        3 * rest.n() as u64 + 2 * rest.m() as u64,
        solved.tau,
        rest.n(),
        rest.m(),
    );
    if !t2.holds {
        return Err(Error::BoundViolated(format!("remainder after peeling: {t2}")));
    }
    let mut inverse = vec![0; rest.n()];
    for (old, new) in peel.remainder.vertex_map.iter().enumerate() {
        if let Some(new) = new {
            inverse[*new] = old;
        }
    }
    let vertices = peel
        .removed
        .iter()
        .copied()
        .chain(solved.witness.vertices.iter().map(|&v| inverse[v]));
    let transversal = Transversal::certify(&h, vertices)
        .ok_or_else(|| Error::BoundViolated("lifted set is not a transversal of the ONH".into()))?;
    let bound = 3 * g.n() / 7;
    if transversal.len() > bound {
        return Err(Error::BoundViolated(format!(
            "pipeline produced {} vertices, above ⌊3n/7⌋ = {bound}",
            transversal.len()
        )));
    }
    Ok(Pipeline3n7 {
        bound,
        transversal,
        protected: protect,
        peeled: peel.removed,
        remainder_n: rest.n(),
        remainder_m: rest.m(),
        remainder_tau: solved.tau,
    })
}

/// Lines of the Fano plane on points `0..7`.
pub fn fano_lines() -> [[Vertex; 3]; 7] {
    [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]
}

/// Point-line incidence graph of the Fano plane: points `0..7`, lines `7..14`.
pub fn heawood() -> Graph {
    let pairs = fano_lines()
        .into_iter()
        .enumerate()
        .flat_map(|(l, line)| line.into_iter().map(move |p| (p, 7 + l)));
    Graph::new(14, pairs).expect("Heawood graph")
}

/// Joins point `p` and line `l` exactly when `p` is not on `l`.
pub fn heawood_bipartite_complement() -> Graph {
    let lines = fano_lines();
    let pairs = (0..7)
        .flat_map(|p| (0..7).map(move |l| (p, l)))
        .filter(|&(p, l)| !lines[l].contains(&p))
        .map(|(p, l)| (p, 7 + l));
    Graph::new(14, pairs).expect("bipartite complement of the Heawood graph")
}

pub fn complete_graph(n: usize) -> Graph {
    Graph::new(n, (0..n).tuple_combinations()).expect("complete graph")
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_validation() {
        assert!(matches!(Graph::new(2, [(0, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(2, [(0, 1), (1, 0)]), Err(Error::InvalidGraph(_))));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn onh_examples() {
        let c4 = cycle(4);
        let h = onh(&c4).unwrap();
        assert_eq!(h.edges(), &[vec![1, 3], vec![0, 2], vec![1, 3], vec![0, 2]]);
        assert_eq!(h.components().len(), 2);

        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(onh(&star).unwrap().edges(), &[vec![1, 2, 3], vec![0], vec![0], vec![0]]);

        assert!(onh(&complete_graph(3)).unwrap().is_connected());
        assert_eq!(onh(&Graph::new(3, [(0, 1)]).unwrap()).unwrap_err(), Error::IsolatedVertex(2));
    }

    #[test]
    fn gamma_t_examples() {
        assert_eq!(gamma_t(&cycle(4)).unwrap(), 2);
        assert_eq!(gamma_t(&complete_graph(4)).unwrap(), 2);
        assert_eq!(gamma_t(&heawood_bipartite_complement()).unwrap(), 6);
        assert_eq!(gamma_t_bruteforce(&cycle(4)).unwrap(), 2);
        assert_eq!(gamma_t_bruteforce(&complete_graph(4)).unwrap(), 2);
    }

    #[test]
    fn heawood_shape() {
        let h = heawood();
        assert!(h.is_regular(3) && h.is_bipartite() && h.is_connected());
        assert_eq!(h.edge_count(), 21);
        let bc = heawood_bipartite_complement();
        assert!(bc.is_regular(4) && bc.is_bipartite());
        assert_eq!(bc.edge_count(), 28);
    }

    #[test]
    fn shrink_examples() {
        let h4 = Hypergraph::new(4, [vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(shrink_to_4(&h4, None).unwrap(), h4);
        let h5 = Hypergraph::new(5, [vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(shrink_to_4(&h5, Some(4)).unwrap().edges(), &[vec![0, 1, 2, 4]]);
        assert_eq!(shrink_to_4(&h5, None).unwrap().edges(), &[vec![0, 1, 2, 3]]);
        let small = Hypergraph::new(3, [vec![0, 1, 2]]).unwrap();
        assert!(matches!(shrink_to_4(&small, None), Err(Error::EdgeTooSmall { .. })));
    }

    #[test]
    fn shrink_five_regular_onh() {
        // K6 is 5-regular.
        let h = shrink_to_4(&onh(&complete_graph(6)).unwrap(), None).unwrap();
        assert!(h.is_uniform(4));
        assert_eq!(h.m(), h.n());
    }

    #[test]
    fn three_n_seven_examples() {
        let solver = Solver::new();
        let r = check_3n7(&heawood_bipartite_complement(), &solver).unwrap();
        assert!(r.is_equality() && r.passes());
        let r = check_3n7(&complete_graph(5), &solver).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.strict);
        assert!(matches!(check_3n7(&cycle(5), &solver), Err(Error::HypothesisViolated(_))));

        let p = pipeline_3n7(&heawood_bipartite_complement(), &solver).unwrap();
        assert_eq!(p.transversal.len(), 6);
        let p = pipeline_3n7(&complete_graph(5), &solver).unwrap();
        assert!(p.transversal.len() <= 2);
        assert!(complete_graph(5).is_total_dominating(&p.transversal.vertices));
    }
}
