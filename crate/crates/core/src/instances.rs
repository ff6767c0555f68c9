//! Named instances, seeded random generators and the conjecture scanner.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::OnceLock;

use itertools::Itertools;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domination::{self, Graph};
use crate::error::{Error, Result};
use crate::family_b::{self, generate_all_b};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::io::{parse_hg, write_hg};
use crate::solver::{tau_bruteforce, Solver};

const H8_HG: &str = include_str!("../data/h8.hg");
const H10_HG: &str = include_str!("../data/h10.hg");

pub fn h2() -> Hypergraph {
    family_b::op_a().hypergraph
}

pub fn h4() -> Hypergraph {
    Hypergraph::new(4, [vec![0, 1, 2, 3]]).expect("H4")
}

/// Vertices `a1 a2 b1 b2 c1 c2` are `0..6`.
pub fn h6() -> Hypergraph {
    Hypergraph::new(6, [vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![2, 3, 4, 5]])
        .expect("H6")
        .with_labels(["a1", "a2", "b1", "b2", "c1", "c2"].map(String::from).to_vec())
        .expect("six labels")
}

pub fn h8() -> Hypergraph {
    parse_hg(H8_HG).expect("golden h8.hg parses")
}

pub fn h10() -> Hypergraph {
    parse_hg(H10_HG).expect("golden h10.hg parses")
}

/// Two copies of `H₂` joined by operation D.
pub fn f() -> Hypergraph {
    let a = family_b::op_a();
    family_b::op_d(&a, &a, [0, 1], [0, 1]).expect("F").hypergraph
}

/// Complements of the Fano lines as 4-edges on the seven points.
pub fn f7_bar() -> Hypergraph {
    let edges = domination::fano_lines()
        .into_iter()
        .map(|l| (0..7).filter(|p| !l.contains(p)).collect::<Vec<_>>());
    Hypergraph::new(7, edges).expect("F7-bar")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Named {
    Hypergraph(Hypergraph),
    Graph(Graph),
}

impl Named {
    pub fn into_hypergraph(self) -> Option<Hypergraph> {
        match self {
            Named::Hypergraph(h) => Some(h),
            Named::Graph(_) => None,
        }
    }

    pub fn into_graph(self) -> Option<Graph> {
        match self {
            Named::Graph(g) => Some(g),
            Named::Hypergraph(_) => None,
        }
    }
}

pub const NAMES: [&str; 11] = [
    "h2", "h4", "h6", "h8", "h10", "f", "f7bar", "heawood", "heawood-bc", "k5", "c4",
];

/// Case-insensitive lookup of a stored instance.
pub fn named(name: &str) -> Result<Named> {
    let key = name.to_ascii_lowercase().replace('_', "-");
    Ok(match key.as_str() {
        "h2" => Named::Hypergraph(h2()),
        "h4" => Named::Hypergraph(h4()),
        "h6" => Named::Hypergraph(h6()),
        "h8" => Named::Hypergraph(h8()),
        "h10" => Named::Hypergraph(h10()),
        "f" => Named::Hypergraph(f()),
        "f7bar" | "f7-bar" | "fano-complement" => Named::Hypergraph(f7_bar()),
        "heawood" => Named::Graph(domination::heawood()),
        "heawood-bc" | "heawood-complement" => Named::Graph(domination::heawood_bipartite_complement()),
        "k5" => Named::Graph(domination::complete_graph(5)),
        "c4" => Named::Graph(domination::cycle(4)),
        _ => return Err(Error::UnknownInstance(name.to_string())),
    })
}

pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every vertex in exactly `d` edges.
    Regular(usize),
    /// Every vertex in at most `d` edges.
    MaxDegree(usize),
    /// Pairwise edge intersections of size at most one.
    Linear,
    /// No degree or intersection constraint.
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub k: usize,
    pub n: usize,
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    /// Target number of edges; `None` lets the mode decide.
    pub edges: Option<usize>,
    /// Permit repeated edges.
    pub allow_multi: bool,
}

impl GeneratorConfig {
    pub fn new(k: usize, n: usize, mode: Mode, seed: u64) -> Self {
        GeneratorConfig {
            k,
            n,
            mode,
            seed,
            trials: DEFAULT_TRIALS,
            edges: None,
            allow_multi: false,
        }
    }

    pub fn with_edges(mut self, m: usize) -> Self {
        self.edges = Some(m);
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn allowing_multi(mut self, allow: bool) -> Self {
        self.allow_multi = allow;
        self
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorConfig { seed, ..self.clone() }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::Precondition(format!(
                "edge size {} must lie in 1..={}",
                self.k, self.n
            )));
        }
        if let Mode::Regular(d) = self.mode {
            if !(self.n * d).is_multiple_of(self.k) {
                return Err(Error::Precondition(format!(
                    "n·d = {} is not divisible by k = {}",
                    self.n * d,
                    self.k
                )));
            }
        }
        Ok(())
    }
}

pub fn random_hypergraph(cfg: &GeneratorConfig) -> Result<Hypergraph> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.mode {
        Mode::Regular(d) => configuration_model(cfg, d, &mut rng),
        Mode::MaxDegree(d) => bounded_degree(cfg, d, &mut rng),
        Mode::Linear => {
            for _ in 0..cfg.trials.max(1) {
                let edges = linear_packing(cfg.n, cfg.k, cfg.edges, &mut rng);
                if cfg.edges.is_none_or(|t| edges.len() == t) {
                    return Hypergraph::new(cfg.n, edges);
                }
            }
            Err(Error::GenerationFailed(cfg.trials))
        }
        Mode::Any => {
            let distinct = binomial(cfg.n, cfg.k);
            let cap = if cfg.allow_multi { 2 * cfg.n } else { (2 * cfg.n).min(distinct) };
            let m = cfg.edges.unwrap_or_else(|| rng.random_range(1..=cap.max(1)));
            if !cfg.allow_multi && m > distinct {
                return Err(Error::GenerationFailed(cfg.trials));
            }
            let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(m);
            let mut attempts = 0;
            while edges.len() < m {
                attempts += 1;
                if attempts > cfg.trials.max(1) * m.max(1) {
                    return Err(Error::GenerationFailed(cfg.trials));
                }
                let e = random_subset(cfg.n, cfg.k, &mut rng);
                if cfg.allow_multi || !edges.contains(&e) {
                    edges.push(e);
                }
            }
            Hypergraph::new(cfg.n, edges)
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Random hypergraph with `m` edges whose sizes are drawn from `sizes`
/// (clamped to `n`), with no degree constraint. Edges may repeat.
pub fn random_mixed(n: usize, m: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Result<Hypergraph> {
    if n == 0 || *sizes.start() == 0 || sizes.is_empty() {
        return Err(Error::Precondition("need n ≥ 1 and positive edge sizes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<Vec<Vertex>> = (0..m)
        .map(|_| {
            let size = rng.random_range(sizes.clone()).min(n);
            random_subset(n, size, &mut rng)
        })
        .collect();
    Hypergraph::new(n, edges)
}

fn random_subset(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vertex> {
    let mut e = rand::seq::index::sample(rng, n, k).into_vec();
    e.sort_unstable();
    e
}

/// Pairs up `d` copies of each vertex into `k`-sets, restarting whenever a
/// set repeats a vertex or (unless allowed) duplicates an earlier set.
fn configuration_model(cfg: &GeneratorConfig, d: usize, rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let mut points: Vec<Vertex> = (0..cfg.n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'trial: for _ in 0..cfg.trials.max(1) {
        points.shuffle(rng);
        let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(points.len() / cfg.k);
        for chunk in points.chunks(cfg.k) {
            let mut e = chunk.to_vec();
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) || (!cfg.allow_multi && edges.contains(&e)) {
                continue 'trial;
            }
            edges.push(e);
        }
        return Hypergraph::new(cfg.n, edges);
    }
    Err(Error::GenerationFailed(cfg.trials))
}

/// Adds random `k`-sets that keep every degree at most `d`. Without a target
/// the result has about `n·d/k` edges, fewer when the sampler gets stuck.
fn bounded_degree(cfg: &GeneratorConfig, d: usize, rng: &mut ChaCha8Rng) -> Result<Hypergraph> {
    let target = cfg.edges.unwrap_or(cfg.n * d / cfg.k);
    let mut deg = vec![0usize; cfg.n];
    let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(target);
    let mut failures = 0;
    while edges.len() < target {
        let free: Vec<Vertex> = (0..cfg.n).filter(|&v| deg[v] < d).collect();
        if free.len() < cfg.k || failures >= cfg.trials.max(1) {
            if cfg.edges.is_some() {
                return Err(Error::GenerationFailed(cfg.trials));
            }
            break;
        }
        let mut e: Vec<Vertex> = free.choose_multiple(rng, cfg.k).copied().collect();
        e.sort_unstable();
        if !cfg.allow_multi && edges.contains(&e) {
            failures += 1;
            continue;
        }
        for &v in &e {
            deg[v] += 1;
        }
        edges.push(e);
    }
    Hypergraph::new(cfg.n, edges)
}

/// Random greedy packing of `k`-sets meeting pairwise in at most one vertex.
fn linear_packing(n: usize, k: usize, target: Option<usize>, rng: &mut ChaCha8Rng) -> Vec<Vec<Vertex>> {
    let mut candidates: Vec<Vec<Vertex>> = (0..n).combinations(k).collect();
    candidates.shuffle(rng);
    let mut covered = vec![false; n * n];
    let mut edges = Vec::new();
    for e in candidates {
        if target.is_some_and(|t| edges.len() >= t) {
            break;
        }
        if e.iter().tuple_combinations().any(|(&u, &v)| covered[u * n + v]) {
            continue;
        }
        for (&u, &v) in e.iter().tuple_combinations() {
            covered[u * n + v] = true;
        }
        edges.push(e);
    }
    edges
}

/// Small bad hypergraphs with maximum degree at most 3, used as planted
/// pieces by [`random_class_h`].
fn planted_pool() -> &'static [Hypergraph] {
    static POOL: OnceLock<Vec<Hypergraph>> = OnceLock::new();
    POOL.get_or_init(|| {
        generate_all_b(7)
            .expect("small family")
            .into_iter()
            .map(|m| m.hypergraph)
            .filter(|h| h.max_degree() <= 3)
            .collect()
    })
}

/// Random hypergraph with edge sizes 2–4 and maximum degree at most 3 on `n`
/// vertices. Some seeds plant small bad hypergraphs before the random edges
/// are added, so the `b` and `b¹` terms are exercised.
pub fn random_class_h(n: usize, seed: u64) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::Precondition("need at least two vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut deg = vec![0usize; n];
    let mut offset = 0;
    let planted = rng.random_range(0..=3);
    for _ in 0..planted {
        let piece = planted_pool().choose(&mut rng).expect("pool is not empty");
        if offset + piece.n() > n {
            break;
        }
        for e in piece.edges() {
            for &v in e {
                deg[offset + v] += 1;
            }
            edges.push(e.iter().map(|&v| offset + v).collect());
        }
        offset += piece.n();
    }
    let extra = rng.random_range(0..=n);
    let mut attempts = 0;
    let mut added = 0;
    while added < extra && attempts < 20 * n {
        attempts += 1;
        let size = rng.random_range(2..=4usize).min(n);
        let free: Vec<Vertex> = (0..n).filter(|&v| deg[v] < 3).collect();
        if free.len() < size {
            break;
        }
        let mut e: Vec<Vertex> = free.choose_multiple(&mut rng, size).copied().collect();
        e.sort_unstable();
        for &v in &e {
            deg[v] += 1;
        }
        edges.push(e);
        added += 1;
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut rng);
    Ok(Hypergraph::new(n, edges)?.relabel(&perm))
}

/// Random connected graph: a random spanning tree plus each further pair
/// with a seed-dependent probability.
pub fn random_connected_graph(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Precondition("need at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.random_range(0.0..0.5);
    let mut pairs: Vec<(Vertex, Vertex)> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    for (u, v) in (0..n).tuple_combinations() {
        if !pairs.contains(&(u, v)) && rng.random_bool(p) {
            pairs.push((u, v));
        }
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(&mut rng);
    Graph::new(n, pairs.into_iter().map(|(u, v)| (perm[u], perm[v])))
}

/// Random graph with minimum degree at least `d`: a sparse random graph
/// topped up by joining each deficient vertex to random low-degree
/// non-neighbours.
pub fn random_min_degree_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n <= d {
        return Err(Error::Precondition(format!("minimum degree {d} needs more than {d} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p: f64 = rng.random_range(0.0..0.3);
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in (0..n).tuple_combinations() {
        if rng.random_bool(p) {
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    let degree = |adj: &Vec<Vec<bool>>, v: Vertex| adj[v].iter().filter(|&&b| b).count();
    for v in 0..n {
        while degree(&adj, v) < d {
            let options: Vec<Vertex> = (0..n).filter(|&u| u != v && !adj[v][u]).collect();
            let low = options.iter().map(|&u| degree(&adj, u)).min().expect("n > d");
            let lows: Vec<Vertex> = options.into_iter().filter(|&u| degree(&adj, u) == low).collect();
            let u = *lows.choose(&mut rng).expect("non-empty");
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    Graph::new(n, (0..n).tuple_combinations().filter(|&(u, v)| adj[u][v]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjecture {
    /// `12τ ≤ 3n + 2m` for linear 4-uniform hypergraphs.
    C2,
    /// `5τ ≤ n + m` for linear 4-uniform hypergraphs.
    C3,
}

impl Conjecture {
    /// Scaled `(lhs, rhs)`.
    pub fn sides(self, tau: usize, n: usize, m: usize) -> (u64, u64) {
        let (t, n, m) = (tau as u64, n as u64, m as u64);
        match self {
            Conjecture::C2 => (12 * t, 3 * n + 2 * m),
            Conjecture::C3 => (5 * t, n + m),
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Conjecture::C2 => "12τ ≤ 3n + 2m",
            Conjecture::C3 => "5τ ≤ n + m",
        }
    }
}

impl FromStr for Conjecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c2" => Ok(Conjecture::C2),
            "c3" => Ok(Conjecture::C3),
            _ => Err(Error::Unsupported(format!("unknown conjecture `{s}` (expected c2 or c3)"))),
        }
    }
}

impl fmt::Display for Conjecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conjecture::C2 => "c2",
            Conjecture::C3 => "c3",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanHit {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub lhs: u64,
    pub rhs: u64,
    pub digest: String,
    /// Instance in `.hg` format.
    pub hg: String,
}

impl ScanHit {
    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn is_violation(&self) -> bool {
        self.lhs > self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub conjecture: Conjecture,
    pub statement: String,
    pub n: usize,
    pub seeds: [u64; 2],
    pub instances: usize,
    /// Violations confirmed by the brute-force oracle.
    pub violations: Vec<ScanHit>,
    /// Violations reported by the main solver that the oracle rejected.
    pub unconfirmed: usize,
    pub tight_count: usize,
    /// The first few tight instances.
    pub tight: Vec<ScanHit>,
    /// Largest `lhs/rhs` observed, as `[lhs, rhs]`.
    pub max_ratio: [u64; 2],
    /// Reference instances evaluated alongside the scan.
    pub reference: Vec<ScanHit>,
}

pub const TIGHT_EXAMPLES_KEPT: usize = 10;

/// Instance used by [`scan_conjectures`] for one seed: a random maximal
/// linear packing of `k`-sets truncated to a random number of edges (at
/// least one).
pub fn scan_instance(n: usize, k: usize, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = linear_packing(n, k, None, &mut rng);
    if !edges.is_empty() {
        let keep = rng.random_range(1..=edges.len());
        edges.truncate(keep);
    }
    Hypergraph::new(n, edges).expect("packing edges are valid")
}

fn evaluate(h: &Hypergraph, which: Conjecture, tau: usize) -> ScanHit {
    let (lhs, rhs) = which.sides(tau, h.n(), h.m());
    ScanHit {
        seed: None,
        name: None,
        n: h.n(),
        m: h.m(),
        tau,
        lhs,
        rhs,
        digest: h.digest(),
        hg: write_hg(h, true),
    }
}

/// Computes exact τ for every seed in `seeds` and collects evidence for the
/// chosen conjecture: confirmed violations, tight cases and the largest
/// ratio. `H₁₀` is always evaluated as a reference. Nothing here proves or
/// refutes the conjecture.
pub fn scan_conjectures(cfg: &GeneratorConfig, which: Conjecture, seeds: Range<u64>, solver: &Solver) -> Result<ScanReport> {
    if cfg.mode != Mode::Linear {
        return Err(Error::Precondition("the scanner needs linear mode".into()));
    }
    if cfg.k == 0 || cfg.k > cfg.n {
        return Err(Error::Precondition(format!("edge size {} must lie in 1..={}", cfg.k, cfg.n)));
    }
    let hits: Vec<ScanHit> = seeds
        .clone()
        .into_par_iter()
        .map(|seed| -> Result<ScanHit> {
            let h = scan_instance(cfg.n, cfg.k, seed);
            let tau = solver.solve(&h)?.tau;
            let mut hit = evaluate(&h, which, tau);
            hit.seed = Some(seed);
            Ok(hit)
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut unconfirmed = 0;
    let mut tight = Vec::new();
    let mut tight_count = 0;
    let mut max_ratio = [0u64, 1u64];
    for hit in hits.iter() {
        if hit.lhs * max_ratio[1] > max_ratio[0] * hit.rhs {
            max_ratio = [hit.lhs, hit.rhs];
        }
        if hit.is_tight() {
            tight_count += 1;
            if tight.len() < TIGHT_EXAMPLES_KEPT {
                tight.push(hit.clone());
            }
        }
        if hit.is_violation() {
            let h = parse_hg(&hit.hg)?;
            let oracle = tau_bruteforce(&h)?.tau;
            let (lhs, rhs) = which.sides(oracle, h.n(), h.m());
            if lhs > rhs {
                violations.push(ScanHit {
                    tau: oracle,
                    lhs,
                    rhs,
                    ..hit.clone()
                });
            } else {
                unconfirmed += 1;
            }
        }
    }
    let reference_h = h10();
    let mut reference = evaluate(&reference_h, which, tau_bruteforce(&reference_h)?.tau);
    reference.name = Some("h10".into());
    Ok(ScanReport {
        conjecture: which,
        statement: which.statement().to_string(),
        n: cfg.n,
        seeds: [seeds.start, seeds.end],
        instances: hits.len(),
        violations,
        unconfirmed,
        tight_count,
        tight,
        max_ratio,
        reference: vec![reference],
    })
}
