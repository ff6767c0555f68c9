//! Transversal bounds evaluated with exact integer arithmetic.
//!
//! Every bound `τ ≤ p/q` is checked as `q·τ ≤ p` after clearing denominators.
//! `φ(H) = 6n + 4e₄ + 6e₃ + 10e₂ + 2b + b¹`, where `b` counts components that
//! are bad hypergraphs and `b¹` is the largest number of vertex-disjoint bad
//! subhypergraphs each met by exactly one other edge.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::canon::is_isomorphic;
use crate::error::{Error, Result};
use crate::family_b::Recognizer;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::instances;
use crate::solver::Solver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// `24τ ≤ φ(H)` for edge sizes 2–4 and `Δ ≤ 3`; strict when `b¹` is odd.
    #[serde(rename = "T1_phi")]
    T1Phi,
    /// `12τ ≤ 3n + 2m` for 4-uniform, `Δ ≤ 3`.
    #[serde(rename = "T2_quarter_sixth")]
    T2QuarterSixth,
    /// `8τ ≤ 3n` for 3-regular 4-uniform.
    #[serde(rename = "T3_three_eighths")]
    T3ThreeEighths,
    /// `6τ ≤ n + 2m` for 4-uniform; equality only for unions of `H₄`/`H₆`.
    #[serde(rename = "CM_6tau")]
    Cm6Tau,
    /// `21τ ≤ 5n + 4m` for 4-uniform.
    #[serde(rename = "TY_21")]
    Ty21,
    /// `7γₜ ≤ 3n` for graphs with minimum degree at least 4.
    #[serde(rename = "TD_3n7")]
    Td3n7,
}

impl TheoremId {
    pub const ALL: [TheoremId; 6] = [
        TheoremId::T1Phi,
        TheoremId::T2QuarterSixth,
        TheoremId::T3ThreeEighths,
        TheoremId::Cm6Tau,
        TheoremId::Ty21,
        TheoremId::Td3n7,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            TheoremId::T1Phi => "t1",
            TheoremId::T2QuarterSixth => "t2",
            TheoremId::T3ThreeEighths => "t3",
            TheoremId::Cm6Tau => "cm",
            TheoremId::Ty21 => "ty",
            TheoremId::Td3n7 => "td",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::T1Phi => "24τ ≤ 6n + 4e₄ + 6e₃ + 10e₂ + 2b + b¹",
            TheoremId::T2QuarterSixth => "12τ ≤ 3n + 2m",
            TheoremId::T3ThreeEighths => "8τ ≤ 3n",
            TheoremId::Cm6Tau => "6τ ≤ n + 2m",
            TheoremId::Ty21 => "21τ ≤ 5n + 4m",
            TheoremId::Td3n7 => "7γₜ ≤ 3n",
        }
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unsupported(format!("unknown theorem `{s}` (expected t1, t2, t3, cm, ty or td)")))
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub statement: String,
    /// Scaled left side, e.g. `24τ`.
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    pub strict: bool,
    /// τ (or γₜ for the domination bound).
    pub value: usize,
    pub n: usize,
    pub m: usize,
    /// Extra condition attached to the bound: strictness for odd `b¹`, or
    /// the component structure at equality. `None` when it does not apply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clause: Option<Clause>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_diagnosis: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Phi>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub description: String,
    pub applies: bool,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(theorem: TheoremId, lhs: u64, rhs: u64, value: usize, n: usize, m: usize) -> Self {
        BoundReport {
            theorem,
            statement: theorem.statement().to_string(),
            lhs,
            rhs,
            holds: lhs <= rhs,
            strict: lhs < rhs,
            value,
            n,
            m,
            clause: None,
            equality_diagnosis: None,
            phi: None,
        }
    }

    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn slack(&self) -> i64 {
        self.rhs as i64 - self.lhs as i64
    }

    /// The inequality holds and any attached clause is satisfied.
    pub fn passes(&self) -> bool {
        self.holds && self.clause.as_ref().is_none_or(|c| !c.applies || c.satisfied)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.strict {
            "<"
        } else if self.holds {
            "="
        } else {
            ">"
        };
        write!(f, "{}: {} {rel} {} ({})", self.theorem, self.lhs, self.rhs, self.statement)?;
        if let Some(d) = &self.equality_diagnosis {
            write!(f, "; {d}")?;
        }
        if let Some(c) = self.clause.as_ref().filter(|c| c.applies) {
            write!(f, "; {}: {}", c.description, if c.satisfied { "ok" } else { "FAILED" })?;
        }
        Ok(())
    }
}

/// Weight of an edge in `φ`.
pub fn omega(size: usize) -> Result<u64> {
    match size {
        2 => Ok(10),
        3 => Ok(6),
        4 => Ok(4),
        _ => Err(Error::HypothesisViolated(format!("edge of size {size} has no weight"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phi {
    pub value: u64,
    pub b: usize,
    pub b1: usize,
}

fn has_small_edge(h: &Hypergraph) -> bool {
    h.edges().iter().any(|e| e.len() == 2 || e.len() == 3)
}

/// Number of components that are bad hypergraphs.
pub fn b_count(h: &Hypergraph, recognizer: &Recognizer) -> Result<usize> {
    // Every bad hypergraph has a 2-edge or a 3-edge.
    if !has_small_edge(h) {
        return Ok(0);
    }
    let mut count = 0;
    for c in h.components() {
        if recognizer.recognize(&c.hypergraph)?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// A candidate for `bⁱ`: a component of `H − F` with `|F| = i` that is a bad
/// hypergraph and is met by exactly `i` edges outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadPiece {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<usize>,
}

pub fn bad_pieces(h: &Hypergraph, i: usize, recognizer: &Recognizer) -> Result<Vec<BadPiece>> {
    if !has_small_edge(h) {
        return Ok(Vec::new());
    }
    let mut pieces: Vec<BadPiece> = Vec::new();
    for removed in (0..h.m()).combinations(i) {
        let kept: Vec<usize> = (0..h.m()).filter(|j| !removed.contains(j)).collect();
        let all: Vec<Vertex> = (0..h.n()).collect();
        let rest = h.sub_hypergraph(&all, &kept);
        for c in rest.hypergraph.components() {
            if c.hypergraph.m() == 0 {
                continue;
            }
            let vertices: Vec<Vertex> = c.vertices.iter().map(|&v| rest.vertices[v]).collect();
            let mut edges: Vec<usize> = c.edges.iter().map(|&j| rest.edges[j]).collect();
            edges.sort_unstable();
            if pieces.iter().any(|p| p.edges == edges && p.vertices == vertices) {
                continue;
            }
            let touching = (0..h.m())
                .filter(|j| !edges.contains(j))
                .filter(|&j| h.edges()[j].iter().any(|v| vertices.contains(v)))
                .count();
            if touching != i {
                continue;
            }
            if recognizer.recognize(&c.hypergraph)?.is_some() {
                pieces.push(BadPiece { vertices, edges });
            }
        }
    }
    Ok(pieces)
}

/// `bⁱ(H)`: the largest number of pairwise vertex-disjoint bad pieces.
pub fn b_i_count(h: &Hypergraph, i: usize, recognizer: &Recognizer) -> Result<usize> {
    let pieces = bad_pieces(h, i, recognizer)?;
    Ok(max_disjoint(&pieces))
}

fn max_disjoint(pieces: &[BadPiece]) -> usize {
    fn go(pieces: &[BadPiece], used: &mut Vec<bool>, start: usize, count: usize, best: &mut usize) {
        *best = (*best).max(count);
        if count + (pieces.len() - start) <= *best {
            return;
        }
        for k in start..pieces.len() {
            if pieces[k].vertices.iter().any(|&v| used[v]) {
                continue;
            }
            for &v in &pieces[k].vertices {
                used[v] = true;
            }
            go(pieces, used, k + 1, count + 1, best);
            for &v in &pieces[k].vertices {
                used[v] = false;
            }
        }
    }
    let n = pieces.iter().flat_map(|p| p.vertices.iter()).max().map_or(0, |v| v + 1);
    let mut best = 0;
    go(pieces, &mut vec![false; n], 0, 0, &mut best);
    best
}

pub fn phi_with(h: &Hypergraph, recognizer: &Recognizer) -> Result<Phi> {
    let mut value = 6 * h.n() as u64;
    for e in h.edges() {
        value += omega(e.len())?;
    }
    let b = b_count(h, recognizer)?;
    let b1 = b_i_count(h, 1, recognizer)?;
    Ok(Phi {
        value: value + 2 * b as u64 + b1 as u64,
        b,
        b1,
    })
}

pub fn phi(h: &Hypergraph) -> Result<Phi> {
    phi_with(h, &Recognizer::new())
}

fn require_sizes(h: &Hypergraph, ok: impl Fn(usize) -> bool, what: &str) -> Result<()> {
    match h.edges().iter().position(|e| !ok(e.len())) {
        Some(j) => Err(Error::HypothesisViolated(format!(
            "{what}: edge {j} has size {}",
            h.edges()[j].len()
        ))),
        None => Ok(()),
    }
}

fn require_max_degree(h: &Hypergraph, d: usize) -> Result<()> {
    if h.max_degree() > d {
        return Err(Error::HypothesisViolated(format!(
            "maximum degree {} exceeds {d}",
            h.max_degree()
        )));
    }
    Ok(())
}

pub fn certify(h: &Hypergraph, theorem: TheoremId) -> Result<BoundReport> {
    certify_with(h, theorem, &Solver::from_env(), &Recognizer::new())
}

pub fn certify_with(
    h: &Hypergraph,
    theorem: TheoremId,
    solver: &Solver,
    recognizer: &Recognizer,
) -> Result<BoundReport> {
    let (n, m) = (h.n() as u64, h.m() as u64);
    match theorem {
        TheoremId::T1Phi => {
            require_sizes(h, |s| (2..=4).contains(&s), "edge sizes must be 2, 3 or 4")?;
            require_max_degree(h, 3)?;
        }
        TheoremId::T2QuarterSixth => {
            require_sizes(h, |s| s == 4, "must be 4-uniform")?;
            require_max_degree(h, 3)?;
        }
        TheoremId::T3ThreeEighths => {
            require_sizes(h, |s| s == 4, "must be 4-uniform")?;
            if !h.is_regular(3) {
                return Err(Error::HypothesisViolated("must be 3-regular".into()));
            }
        }
        TheoremId::Cm6Tau | TheoremId::Ty21 => {
            require_sizes(h, |s| s == 4, "must be 4-uniform")?;
        }
        TheoremId::Td3n7 => {
            return Err(Error::Unsupported(
                "the 3n/7 bound applies to graphs; use domination::check_3n7".into(),
            ))
        }
    }
    let tau = solver.solve(h)?.tau;
    let t = tau as u64;
    let mut report = match theorem {
        TheoremId::T1Phi => {
            let p = phi_with(h, recognizer)?;
            let mut r = BoundReport::new(theorem, 24 * t, p.value, tau, h.n(), h.m());
            r.clause = Some(Clause {
                description: "strict when b¹ is odd".into(),
                applies: p.b1 % 2 == 1,
                satisfied: p.b1 % 2 == 0 || r.strict,
            });
            r.phi = Some(p);
            r
        }
        TheoremId::T2QuarterSixth => BoundReport::new(theorem, 12 * t, 3 * n + 2 * m, tau, h.n(), h.m()),
        TheoremId::T3ThreeEighths => BoundReport::new(theorem, 8 * t, 3 * n, tau, h.n(), h.m()),
        TheoremId::Cm6Tau => {
            let mut r = BoundReport::new(theorem, 6 * t, n + 2 * m, tau, h.n(), h.m());
            if r.is_equality() {
                let ok = all_components_h4_h6(h);
                r.equality_diagnosis = Some(if ok {
                    "all components H4/H6".into()
                } else {
                    "equality with a component other than H4/H6".into()
                });
                r.clause = Some(Clause {
                    description: "equality only for unions of H4 and H6".into(),
                    applies: true,
                    satisfied: ok,
                });
            }
            r
        }
        TheoremId::Ty21 => BoundReport::new(theorem, 21 * t, 5 * n + 4 * m, tau, h.n(), h.m()),
        TheoremId::Td3n7 => unreachable!("rejected above"),
    };
    if report.is_equality() && report.equality_diagnosis.is_none() {
        report.equality_diagnosis = Some("equality".into());
    }
    Ok(report)
}

/// Whether every component is isomorphic to `H₄` or `H₆`.
pub fn all_components_h4_h6(h: &Hypergraph) -> bool {
    let h4 = instances::h4();
    let h6 = instances::h6();
    h.components()
        .iter()
        .all(|c| is_isomorphic(&c.hypergraph, &h4) || is_isomorphic(&c.hypergraph, &h6))
}
