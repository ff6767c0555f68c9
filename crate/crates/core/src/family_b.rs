//! The family of bad hypergraphs.
//!
//! Members are built from the two-vertex hypergraph `H₂` by four operations:
//!
//! * **A** creates `H₂ = ({x,y}, {{x,y}})`; `{x,y}` is recorded as an A-pair.
//! * **B** replaces a 2-edge `{u,v}` by `{u,v,x}, {u,v,y}, {x,y}` for two new
//!   vertices `x, y`.
//! * **C** replaces a 3-edge `{u,v,w}` by `{u,v,w,x}, {u,v,w,y}, {x,y}`.
//! * **D** joins two members through 2-edges `{u₁,v₁}` and `{u₂,v₂}`:
//!   both are replaced by `{u₁,v₁,x}, {u₂,v₂,x}, {u₁,v₁,u₂,v₂}` for one new
//!   vertex `x`.
//!
//! A [`BCertificate`] is the list of steps that builds a member. Recognition
//! ([`Recognizer`]) undoes the operations by pattern matching with full
//! backtracking and remembers failed instances by canonical form.

use std::collections::HashMap;

use dashmap::DashSet;
use itertools::Itertools;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::hypergraph::{intersection_size, Hypergraph, Vertex};
use crate::solver::{Constraints, Solver};

/// Recognition is refused above this order.
pub const RECOGNITION_LIMIT: usize = 20;

/// Above this order the triple-of-pairs check is sampled instead of exhaustive.
pub const TRIPLE_EXHAUSTIVE_LIMIT: usize = 8;
pub const TRIPLE_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Step {
    A { x: Vertex, y: Vertex },
    B { host: [Vertex; 2], new: [Vertex; 2] },
    C { host: [Vertex; 3], new: [Vertex; 2] },
    D { left: [Vertex; 2], right: [Vertex; 2], new: Vertex },
}

impl Step {
    fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Step {
        match *self {
            Step::A { x, y } => Step::A { x: f(x), y: f(y) },
            Step::B { host, new } => Step::B {
                host: host.map(&f),
                new: new.map(&f),
            },
            Step::C { host, new } => Step::C {
                host: host.map(&f),
                new: new.map(&f),
            },
            Step::D { left, right, new } => Step::D {
                left: left.map(&f),
                right: right.map(&f),
                new: f(new),
            },
        }
    }

    pub fn kind(&self) -> char {
        match self {
            Step::A { .. } => 'A',
            Step::B { .. } => 'B',
            Step::C { .. } => 'C',
            Step::D { .. } => 'D',
        }
    }
}

/// Construction trace of a member of the family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BCertificate {
    pub steps: Vec<Step>,
    pub a_pairs: Vec<[Vertex; 2]>,
}

impl BCertificate {
    pub fn from_steps(steps: Vec<Step>) -> Self {
        let a_pairs = steps
            .iter()
            .filter_map(|s| match *s {
                Step::A { x, y } => Some(if x < y { [x, y] } else { [y, x] }),
                _ => None,
            })
            .collect();
        BCertificate { steps, a_pairs }
    }

    pub fn kinds(&self) -> String {
        self.steps.iter().map(Step::kind).collect()
    }

    fn map(&self, f: impl Fn(Vertex) -> Vertex + Copy) -> Self {
        BCertificate::from_steps(self.steps.iter().map(|s| s.map(f)).collect())
    }

    pub fn is_a_pair(&self, s: Vertex, t: Vertex) -> bool {
        let p = if s < t { [s, t] } else { [t, s] };
        self.a_pairs.contains(&p)
    }

    /// Replays the steps from the empty hypergraph.
    pub fn replay(&self) -> Result<Hypergraph> {
        Ok(self.replay_traced()?.0)
    }

    /// Replays and records, per step, the member it produced and the
    /// member(s) it consumed.
    pub fn replay_traced(&self) -> Result<(Hypergraph, Vec<StepTrace>)> {
        let n = self
            .steps
            .iter()
            .flat_map(|s| match *s {
                Step::A { x, y } => vec![x, y],
                Step::B { new, .. } | Step::C { new, .. } => new.to_vec(),
                Step::D { new, .. } => vec![new],
            })
            .max()
            .map_or(0, |v| v + 1);
        let mut state = ReplayState {
            present: vec![false; n],
            comp: vec![usize::MAX; n],
            edges: Vec::new(),
            next_comp: 0,
        };
        let mut trace = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            let bad = |msg: String| Error::InvalidStep { step: i, msg };
            match *step {
                Step::A { x, y } => {
                    state.fresh(&[x, y]).map_err(bad)?;
                    let c = state.new_comp();
                    state.comp[x] = c;
                    state.comp[y] = c;
                    state.edges.push(vec![x, y]);
                    trace.push(StepTrace {
                        parents: Vec::new(),
                        child: state.member(c),
                    });
                }
                Step::B { host, new } => {
                    let parent = state.take_edge(&host).map_err(bad)?;
                    let before = state.member_with(parent, &host);
                    state.fresh(&new).map_err(bad)?;
                    for v in new {
                        state.comp[v] = parent;
                    }
                    let [u, v] = host;
                    let [x, y] = new;
                    state.edges.extend([vec![u, v, x], vec![u, v, y], vec![x, y]]);
                    trace.push(StepTrace {
                        parents: vec![before],
                        child: state.member(parent),
                    });
                }
                Step::C { host, new } => {
                    let parent = state.take_edge(&host).map_err(bad)?;
                    let before = state.member_with(parent, &host);
                    state.fresh(&new).map_err(bad)?;
                    for v in new {
                        state.comp[v] = parent;
                    }
                    let [u, v, w] = host;
                    let [x, y] = new;
                    state
                        .edges
                        .extend([vec![u, v, w, x], vec![u, v, w, y], vec![x, y]]);
                    trace.push(StepTrace {
                        parents: vec![before],
                        child: state.member(parent),
                    });
                }
                Step::D { left, right, new } => {
                    let (cl, cr) = (state.comp_of(&left), state.comp_of(&right));
                    if cl.is_none() || cr.is_none() || cl == cr {
                        return Err(bad("D hosts must lie in two different members".into()));
                    }
                    let p1 = state.take_edge(&left).map_err(bad)?;
                    let left_member = state.member_with(p1, &left);
                    let p2 = state.take_edge(&right).map_err(bad)?;
                    let right_member = state.member_with(p2, &right);
                    state.fresh(&[new]).map_err(bad)?;
                    for c in state.comp.iter_mut() {
                        if *c == p2 {
                            *c = p1;
                        }
                    }
                    state.comp[new] = p1;
                    let [u1, v1] = left;
                    let [u2, v2] = right;
                    state
                        .edges
                        .extend([vec![u1, v1, new], vec![u2, v2, new], vec![u1, v1, u2, v2]]);
                    trace.push(StepTrace {
                        parents: vec![left_member, right_member],
                        child: state.member(p1),
                    });
                }
            }
        }
        if let Some(v) = state.present.iter().position(|&p| !p) {
            return Err(Error::InvalidStep {
                step: self.steps.len(),
                msg: format!("vertex {v} is never created"),
            });
        }
        let comps: Vec<usize> = state.comp.iter().copied().unique().collect();
        if comps.len() > 1 {
            return Err(Error::InvalidStep {
                step: self.steps.len(),
                msg: format!("{} separate members remain", comps.len()),
            });
        }
        if *self != BCertificate::from_steps(self.steps.clone()) {
            return Err(Error::InvalidStep {
                step: self.steps.len(),
                msg: "A-pair list does not match the A steps".into(),
            });
        }
        Ok((Hypergraph::new(n, state.edges)?, trace))
    }

    pub fn certifies(&self, h: &Hypergraph) -> bool {
        matches!(self.replay(), Ok(g) if g == *h)
    }
}

/// Member produced by one replay step and the member(s) it was built from.
#[derive(Clone, Debug)]
pub struct StepTrace {
    pub parents: Vec<Hypergraph>,
    pub child: Hypergraph,
}

struct ReplayState {
    present: Vec<bool>,
    comp: Vec<usize>,
    edges: Vec<Vec<Vertex>>,
    next_comp: usize,
}

impl ReplayState {
    fn new_comp(&mut self) -> usize {
        self.next_comp += 1;
        self.next_comp - 1
    }

    fn fresh(&mut self, vs: &[Vertex]) -> std::result::Result<(), String> {
        for (i, &v) in vs.iter().enumerate() {
            if self.present[v] || vs[..i].contains(&v) {
                return Err(format!("vertex {v} is not new"));
            }
        }
        for &v in vs {
            self.present[v] = true;
        }
        Ok(())
    }

    fn comp_of(&self, host: &[Vertex]) -> Option<usize> {
        host.iter().all(|&v| self.present[v]).then(|| self.comp[host[0]])
    }

    /// Removes one copy of `host`; returns the member it belonged to.
    fn take_edge(&mut self, host: &[Vertex]) -> std::result::Result<usize, String> {
        let mut h = host.to_vec();
        h.sort_unstable();
        let pos = self
            .edges
            .iter()
            .position(|e| *e == h)
            .ok_or_else(|| format!("host edge {host:?} is not present"))?;
        self.edges.remove(pos);
        Ok(self.comp[host[0]])
    }

    fn member(&self, c: usize) -> Hypergraph {
        self.member_with(c, &[])
    }

    /// Member `c`, optionally with an edge that was just taken put back.
    fn member_with(&self, c: usize, extra: &[Vertex]) -> Hypergraph {
        let vertices: Vec<Vertex> = (0..self.present.len())
            .filter(|&v| self.present[v] && self.comp[v] == c)
            .collect();
        let mut map = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            map.insert(v, i);
        }
        let mut edges: Vec<Vec<Vertex>> = self
            .edges
            .iter()
            .filter(|e| self.comp[e[0]] == c)
            .map(|e| e.iter().map(|v| map[v]).collect())
            .collect();
        if !extra.is_empty() {
            edges.push(extra.iter().map(|v| map[v]).collect());
        }
        Hypergraph::new(vertices.len(), edges).expect("replayed member is valid")
    }
}

/// A member of the family together with a certificate for it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Member {
    pub hypergraph: Hypergraph,
    pub certificate: BCertificate,
}

impl Member {
    pub fn two_edges(&self) -> Vec<[Vertex; 2]> {
        self.hypergraph
            .edges()
            .iter()
            .filter(|e| e.len() == 2)
            .map(|e| [e[0], e[1]])
            .unique()
            .collect()
    }

    pub fn three_edges(&self) -> Vec<[Vertex; 3]> {
        self.hypergraph
            .edges()
            .iter()
            .filter(|e| e.len() == 3)
            .map(|e| [e[0], e[1], e[2]])
            .unique()
            .collect()
    }
}

/// Operation A: the hypergraph `H₂`.
pub fn op_a() -> Member {
    Member {
        hypergraph: Hypergraph::new(2, [vec![0, 1]]).expect("H2"),
        certificate: BCertificate::from_steps(vec![Step::A { x: 0, y: 1 }]),
    }
}

fn replace_host(h: &Hypergraph, host: &[Vertex], added: usize, new_edges: Vec<Vec<Vertex>>) -> Result<Hypergraph> {
    let pos = h
        .position_of_edge(host)
        .ok_or_else(|| Error::Precondition(format!("{host:?} is not an edge")))?;
    let mut edges = h.edges().to_vec();
    edges.remove(pos);
    edges.extend(new_edges);
    Hypergraph::new(h.n() + added, edges)
}

/// Operation B on the 2-edge `host`; the new vertices are `n` and `n + 1`.
pub fn op_b(base: &Member, host: [Vertex; 2]) -> Result<Member> {
    let [u, v] = host;
    let (x, y) = (base.hypergraph.n(), base.hypergraph.n() + 1);
    if u == v || !base.hypergraph.has_edge(&host) {
        return Err(Error::Precondition(format!("{host:?} is not a 2-edge")));
    }
    let h = replace_host(&base.hypergraph, &host, 2, vec![vec![u, v, x], vec![u, v, y], vec![x, y]])?;
    let mut steps = base.certificate.steps.clone();
    steps.push(Step::B { host, new: [x, y] });
    Ok(Member {
        hypergraph: h,
        certificate: BCertificate::from_steps(steps),
    })
}

/// Operation C on the 3-edge `host`; the new vertices are `n` and `n + 1`.
pub fn op_c(base: &Member, host: [Vertex; 3]) -> Result<Member> {
    let [u, v, w] = host;
    let (x, y) = (base.hypergraph.n(), base.hypergraph.n() + 1);
    if u == v || v == w || u == w || !base.hypergraph.has_edge(&host) {
        return Err(Error::Precondition(format!("{host:?} is not a 3-edge")));
    }
    let h = replace_host(
        &base.hypergraph,
        &host,
        2,
        vec![vec![u, v, w, x], vec![u, v, w, y], vec![x, y]],
    )?;
    let mut steps = base.certificate.steps.clone();
    steps.push(Step::C { host, new: [x, y] });
    Ok(Member {
        hypergraph: h,
        certificate: BCertificate::from_steps(steps),
    })
}

/// Operation D. The operand with the smaller canonical form goes first
/// (keeps its labels); the other is shifted past it and the new vertex is
/// the last one.
pub fn op_d(b1: &Member, b2: &Member, host1: [Vertex; 2], host2: [Vertex; 2]) -> Result<Member> {
    for (m, host) in [(b1, host1), (b2, host2)] {
        if host[0] == host[1] || !m.hypergraph.has_edge(&host) {
            return Err(Error::Precondition(format!("{host:?} is not a 2-edge")));
        }
    }
    let (first, second, h1, h2) = if canonical_form(&b2.hypergraph) < canonical_form(&b1.hypergraph) {
        (b2, b1, host2, host1)
    } else {
        (b1, b2, host1, host2)
    };
    let shift = first.hypergraph.n();
    let x = shift + second.hypergraph.n();
    let h2 = h2.map(|v| v + shift);
    let union = first.hypergraph.disjoint_union(&second.hypergraph);
    let mut edges = union.edges().to_vec();
    for host in [h1, h2] {
        let pos = edges
            .iter()
            .position(|e| e.as_slice() == host)
            .expect("host checked above");
        edges.remove(pos);
    }
    edges.extend([
        vec![h1[0], h1[1], x],
        vec![h2[0], h2[1], x],
        vec![h1[0], h1[1], h2[0], h2[1]],
    ]);
    let mut steps = first.certificate.steps.clone();
    steps.extend(second.certificate.map(|v| v + shift).steps);
    steps.push(Step::D {
        left: h1,
        right: h2,
        new: x,
    });
    Ok(Member {
        hypergraph: Hypergraph::new(x + 1, edges)?,
        certificate: BCertificate::from_steps(steps),
    })
}

/// Every member with at most `max_n` vertices, once per isomorphism class,
/// ordered by number of vertices and then by discovery.
pub fn generate_all_b(max_n: usize) -> Result<Vec<Member>> {
    if max_n < 2 {
        return Err(Error::Precondition("max_n must be at least 2".into()));
    }
    let mut by_n: Vec<Vec<Member>> = vec![Vec::new(); max_n + 1];
    by_n[2].push(op_a());
    for n in 3..=max_n {
        let mut candidates: Vec<Member> = Vec::new();
        for base in &by_n[n - 2] {
            for host in base.two_edges() {
                candidates.push(op_b(base, host)?);
            }
            for host in base.three_edges() {
                candidates.push(op_c(base, host)?);
            }
        }
        for n1 in 2..n {
            let n2 = n - 1 - n1;
            if n2 < n1 {
                break;
            }
            for (i, m1) in by_n[n1].iter().enumerate() {
                let start = if n1 == n2 { i } else { 0 };
                for m2 in &by_n[n2][start..] {
                    for h1 in m1.two_edges() {
                        for h2 in m2.two_edges() {
                            candidates.push(op_d(m1, m2, h1, h2)?);
                        }
                    }
                }
            }
        }
        let forms: Vec<CanonicalForm> = candidates.par_iter().map(|m| canonical_form(&m.hypergraph)).collect();
        let mut seen = std::collections::HashSet::new();
        for (m, f) in candidates.into_iter().zip(forms) {
            if seen.insert(f) {
                by_n[n].push(m);
            }
        }
    }
    Ok(by_n.into_iter().flatten().collect())
}

/// Membership test by undoing operations. Failures are memoised by
/// canonical form; the table may be shared across threads.
#[derive(Debug, Default)]
pub struct Recognizer {
    failures: DashSet<CanonicalForm>,
    limit: usize,
}

impl Recognizer {
    pub fn new() -> Self {
        Recognizer {
            failures: DashSet::new(),
            limit: RECOGNITION_LIMIT,
        }
    }

    pub fn with_limit(limit: usize) -> Self {
        Recognizer {
            failures: DashSet::new(),
            limit,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Fast necessary conditions; `false` means certainly not a member.
    pub fn may_be_member(h: &Hypergraph) -> bool {
        if h.n() == 2 {
            return h.m() == 1 && h.edges()[0].len() == 2;
        }
        if h.edges().iter().any(|e| !(2..=4).contains(&e.len())) {
            return false;
        }
        let (e2, e3, e4) = (h.edges_of_size(2), h.edges_of_size(3), h.edges_of_size(4));
        // Members always contain a 2-edge or a 3-edge.
        if e2 + e3 == 0 {
            return false;
        }
        // Every step adds exactly 24 to 6n + 4e4 + 6e3 + 10e2 + 2 per unit of τ.
        if !(6 * h.n() + 4 * e4 + 6 * e3 + 10 * e2 + 2).is_multiple_of(24) {
            return false;
        }
        h.min_degree() >= 2 && h.is_connected()
    }

    pub fn recognize(&self, h: &Hypergraph) -> Result<Option<BCertificate>> {
        if !Self::may_be_member(h) {
            return Ok(None);
        }
        if h.n() > self.limit {
            return Err(Error::Unsupported(format!(
                "membership test for n = {} exceeds the recognition limit {}",
                h.n(),
                self.limit
            )));
        }
        Ok(self.search(h))
    }

    fn search(&self, h: &Hypergraph) -> Option<BCertificate> {
        if h.n() == 2 {
            return (h.m() == 1 && h.edges()[0].len() == 2)
                .then(|| BCertificate::from_steps(vec![Step::A { x: 0, y: 1 }]));
        }
        if !Self::may_be_member(h) {
            return None;
        }
        let form = canonical_form(h);
        if self.failures.contains(&form) {
            return None;
        }
        let found = self.undo_b_or_c(h).or_else(|| self.undo_d(h));
        if found.is_none() {
            self.failures.insert(form);
        }
        found
    }

    fn undo_b_or_c(&self, h: &Hypergraph) -> Option<BCertificate> {
        let deg = h.degrees();
        let incident = incidence(h);
        for (j, e) in h.edges().iter().enumerate() {
            if e.len() != 2 {
                continue;
            }
            let (x, y) = (e[0], e[1]);
            if deg[x] != 2 || deg[y] != 2 {
                continue;
            }
            let fx = other_edge(&incident[x], j);
            let fy = other_edge(&incident[y], j);
            if fx == fy {
                continue;
            }
            let ex = &h.edges()[fx];
            let ey = &h.edges()[fy];
            if ex.len() != ey.len() || !(3..=4).contains(&ex.len()) {
                continue;
            }
            let core: Vec<Vertex> = ex.iter().copied().filter(|&v| v != x).collect();
            let core_y: Vec<Vertex> = ey.iter().copied().filter(|&v| v != y).collect();
            if core != core_y || core.contains(&y) {
                continue;
            }
            let reduced = rebuild(h, &[x, y], &[j, fx, fy], std::slice::from_ref(&core));
            if let Some(cert) = self.search(&reduced.hypergraph) {
                let map = &reduced.vertices;
                let mut steps = cert.map(|v| map[v]).steps;
                steps.push(match *core.as_slice() {
                    [u, v] => Step::B {
                        host: [u, v],
                        new: [x, y],
                    },
                    [u, v, w] => Step::C {
                        host: [u, v, w],
                        new: [x, y],
                    },
                    _ => unreachable!("core has two or three vertices"),
                });
                return Some(BCertificate::from_steps(steps));
            }
        }
        None
    }

    fn undo_d(&self, h: &Hypergraph) -> Option<BCertificate> {
        let deg = h.degrees();
        let incident = incidence(h);
        for x in 0..h.n() {
            if deg[x] != 2 {
                continue;
            }
            let (f1, f2) = (incident[x][0], incident[x][1]);
            let (e1, e2) = (&h.edges()[f1], &h.edges()[f2]);
            if e1.len() != 3 || e2.len() != 3 {
                continue;
            }
            let left: Vec<Vertex> = e1.iter().copied().filter(|&v| v != x).collect();
            let right: Vec<Vertex> = e2.iter().copied().filter(|&v| v != x).collect();
            if intersection_size(&left, &right) != 0 {
                continue;
            }
            let mut joint = [left.clone(), right.clone()].concat();
            joint.sort_unstable();
            let Some(g) = h.position_of_edge(&joint) else {
                continue;
            };
            let reduced = rebuild(h, &[x], &[f1, f2, g], &[left.clone(), right.clone()]);
            let comps = reduced.hypergraph.components();
            if comps.len() != 2 {
                continue;
            }
            let map = &reduced.vertices;
            let mut certs = Vec::new();
            for c in &comps {
                match self.search(&c.hypergraph) {
                    Some(cert) => certs.push((canonical_form(&c.hypergraph), cert.map(|v| map[c.vertices[v]]))),
                    None => break,
                }
            }
            if certs.len() != 2 {
                continue;
            }
            let in_first = |v: Vertex| comps[0].vertices.iter().any(|&w| map[w] == v);
            if in_first(left[0]) == in_first(right[0]) {
                continue;
            }
            let (mut l, mut r) = ([left[0], left[1]], [right[0], right[1]]);
            // Smaller canonical operand first, matching `op_d`.
            if certs[1].0 < certs[0].0 {
                certs.swap(0, 1);
            }
            if !certs[0].1.steps.iter().any(|s| touches(s, l[0])) {
                std::mem::swap(&mut l, &mut r);
            }
            let mut steps = certs[0].1.steps.clone();
            steps.extend(certs[1].1.steps.clone());
            steps.push(Step::D {
                left: l,
                right: r,
                new: x,
            });
            return Some(BCertificate::from_steps(steps));
        }
        None
    }
}

fn touches(step: &Step, v: Vertex) -> bool {
    match *step {
        Step::A { x, y } => x == v || y == v,
        Step::B { new, .. } | Step::C { new, .. } => new.contains(&v),
        Step::D { new, .. } => new == v,
    }
}

fn incidence(h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); h.n()];
    for (j, e) in h.edges().iter().enumerate() {
        for &v in e {
            inc[v].push(j);
        }
    }
    inc
}

fn other_edge(incident: &[usize], not: usize) -> usize {
    incident.iter().copied().find(|&j| j != not).unwrap_or(not)
}

/// Drops `vertices` and the edges `drop`, adds `add`, and relabels what is
/// left to `0..`. The component's vertex map points back into `h`.
fn rebuild(h: &Hypergraph, vertices: &[Vertex], drop: &[usize], add: &[Vec<Vertex>]) -> crate::hypergraph::Component {
    let mut edges: Vec<Vec<Vertex>> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(j, _)| !drop.contains(j))
        .map(|(_, e)| e.clone())
        .collect();
    edges.extend(add.iter().cloned());
    let full = Hypergraph::new(h.n(), edges).expect("rebuilt edges stay in range");
    let kept: Vec<Vertex> = (0..h.n()).filter(|v| !vertices.contains(v)).collect();
    let all: Vec<usize> = (0..full.m()).collect();
    full.sub_hypergraph(&kept, &all)
}

/// Shared default recognizer.
pub fn is_in_b(h: &Hypergraph) -> Result<Option<BCertificate>> {
    static SHARED: std::sync::OnceLock<Recognizer> = std::sync::OnceLock::new();
    SHARED.get_or_init(Recognizer::new).recognize(h)
}

pub const LEMMA5_PARTS: [&str; 13] = [
    "i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii", "xiii",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma5Check {
    pub part: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma5Report {
    pub digest: String,
    pub n: usize,
    pub m: usize,
    pub tau: usize,
    pub certificate: String,
    pub checks: Vec<Lemma5Check>,
}

impl Lemma5Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn part(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.part == name).map(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Lemma5Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Checks the thirteen structural and transversal properties every member of
/// the family has, each by direct computation with `solver` as the τ oracle.
pub fn verify_lemma5(member: &Member, solver: &Solver) -> Result<Lemma5Report> {
    let h = &member.hypergraph;
    let cert = &member.certificate;
    let (replayed, trace) = cert.replay_traced()?;
    if replayed != *h {
        return Err(Error::CertificateMismatch);
    }
    let n = h.n();
    let tau = solver.solve(h)?.tau;
    let mut checks = Vec::with_capacity(13);
    let mut record = |part: &str, failure: Option<String>| {
        checks.push(Lemma5Check {
            part: part.to_string(),
            pass: failure.is_none(),
            detail: failure,
        })
    };

    // (i), (ii): τ growth along every step of the certificate.
    let mut bc = None;
    let mut d = None;
    for (i, (step, t)) in cert.steps.iter().zip(&trace).enumerate() {
        let child = solver.solve(&t.child)?.tau;
        match step {
            Step::A { .. } => {}
            Step::B { .. } | Step::C { .. } => {
                let parent = solver.solve(&t.parents[0])?.tau;
                if child != parent + 1 && bc.is_none() {
                    bc = Some(format!("step {i}: τ {child} after, {parent} before"));
                }
            }
            Step::D { .. } => {
                let p1 = solver.solve(&t.parents[0])?.tau;
                let p2 = solver.solve(&t.parents[1])?.tau;
                if child != p1 + p2 && d.is_none() {
                    d = Some(format!("step {i}: τ {child} vs {p1} + {p2}"));
                }
            }
        }
    }
    record("i", bc);
    record("ii", d);

    let (e2, e3, e4) = (h.edges_of_size(2), h.edges_of_size(3), h.edges_of_size(4));
    let weight = 6 * n + 4 * e4 + 6 * e3 + 10 * e2 + 2;
    record(
        "iii",
        (24 * tau != weight).then(|| format!("24τ = {} but formula gives {weight}", 24 * tau)),
    );

    let mut seen = vec![false; n];
    let mut overlap = None;
    for p in &cert.a_pairs {
        for &v in p {
            if seen[v] {
                overlap = Some(format!("vertex {v} lies in two A-pairs"));
            }
            seen[v] = true;
        }
    }
    record("iv", overlap);

    let mut fail = None;
    for j in 0..h.m() {
        let t = solver.solve(&h.remove_edge(j)?)?.tau;
        if t + 1 != tau {
            fail = Some(format!("removing edge {j} gives τ = {t}"));
            break;
        }
    }
    record("v", fail);

    let mut fail = None;
    for s in 0..n {
        if solver.solve_constrained(h, &Constraints::include([s]))?.tau != tau {
            fail = Some(format!("no τ-set contains {s}"));
            break;
        }
    }
    record("vi", fail);

    let mut fail = None;
    'pairs: for s in 0..n {
        for t in s + 1..n {
            let both = solver.solve_constrained(h, &Constraints::include([s, t]))?.tau == tau;
            if both == cert.is_a_pair(s, t) {
                fail = Some(format!(
                    "pair {{{s},{t}}}: A-pair = {}, τ-set with both = {both}",
                    cert.is_a_pair(s, t)
                ));
                break 'pairs;
            }
        }
    }
    record("vii", fail);

    record("viii", check_pair_triples(h, tau, solver)?);

    let two: Vec<&Vec<Vertex>> = h.edges().iter().filter(|e| e.len() == 2).collect();
    let three: Vec<&Vec<Vertex>> = h.edges().iter().filter(|e| e.len() == 3).collect();
    let four: Vec<&Vec<Vertex>> = h.edges().iter().filter(|e| e.len() == 4).collect();
    let fail = four.iter().find_map(|f| {
        let hits = two.iter().filter(|e| intersection_size(e, f) > 0).count();
        (hits >= 3).then(|| format!("4-edge {f:?} meets {hits} 2-edges"))
    });
    record("ix", fail);

    let deg = h.degrees();
    let is_h2 = n == 2;
    let fail = (!is_h2)
        .then(|| (0..n).find(|&v| deg[v] < 2).map(|v| format!("vertex {v} has degree {}", deg[v])))
        .flatten();
    record("x", fail);

    let fail = (0..n)
        .filter(|&v| deg[v] == 2)
        .find(|&v| !h.edges().iter().any(|e| e.len() <= 3 && e.contains(&v)))
        .map(|v| format!("degree-2 vertex {v} lies only in 4-edges"));
    record("xi", fail);

    let overlapping_threes = three
        .iter()
        .tuple_combinations()
        .any(|(a, b)| intersection_size(a, b) >= 2);
    let fours_meet_in_three = four
        .iter()
        .tuple_combinations()
        .any(|(a, b)| intersection_size(a, b) == 3);
    let fail = (!is_h2 && e2 > 0 && !overlapping_threes && !fours_meet_in_three)
        .then(|| "no overlapping 3-edges and no 4-edges sharing three vertices".to_string());
    record("xii", fail);

    let fail = if !is_h2 && !fours_meet_in_three {
        two.iter()
            .find(|e| {
                !three.iter().tuple_combinations().any(|(a, b)| {
                    intersection_size(a, b) >= 2 && intersection_size(e, a) > 0 && intersection_size(e, b) > 0
                })
            })
            .map(|e| format!("2-edge {e:?} meets no pair of overlapping 3-edges"))
    } else {
        None
    };
    record("xiii", fail);

    Ok(Lemma5Report {
        digest: h.digest(),
        n,
        m: h.m(),
        tau,
        certificate: cert.kinds(),
        checks,
    })
}

fn check_pair_triples(h: &Hypergraph, tau: usize, solver: &Solver) -> Result<Option<String>> {
    let n = h.n();
    let pairs: Vec<(Vertex, Vertex)> = (0..n).tuple_combinations().collect();
    let triples: Vec<Vec<(Vertex, Vertex)>> = if n <= TRIPLE_EXHAUSTIVE_LIMIT {
        pairs.iter().copied().combinations_with_replacement(3).collect()
    } else {
        let seed = u64::from_str_radix(&h.digest()[..16], 16).expect("hex digest");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..TRIPLE_SAMPLES)
            .map(|_| (0..3).map(|_| *pairs.choose(&mut rng).expect("n >= 2")).collect())
            .collect()
    };
    for t in triples {
        match solver.solve_with_pair_targets(h, &t)? {
            Some(r) if r.tau == tau => {}
            _ => return Ok(Some(format!("no τ-set meets all of {t:?}"))),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::tau_bruteforce;

    fn b4() -> Member {
        op_b(&op_a(), [0, 1]).unwrap()
    }

    fn f() -> Member {
        op_d(&op_a(), &op_a(), [0, 1], [0, 1]).unwrap()
    }

    #[test]
    fn op_a_is_h2() {
        let m = op_a();
        assert_eq!((m.hypergraph.n(), m.hypergraph.m()), (2, 1));
        assert_eq!(m.hypergraph.edges()[0], vec![0, 1]);
        assert_eq!(tau_bruteforce(&m.hypergraph).unwrap().tau, 1);
        assert_eq!(m.certificate.a_pairs, vec![[0, 1]]);
    }

    #[test]
    fn op_b_example() {
        let m = b4();
        assert_eq!((m.hypergraph.n(), m.hypergraph.m()), (4, 3));
        assert_eq!(m.hypergraph.edges(), &[vec![0, 1, 2], vec![0, 1, 3], vec![2, 3]]);
        assert_eq!(tau_bruteforce(&m.hypergraph).unwrap().tau, 2);
        assert_eq!(m.certificate.a_pairs, vec![[0, 1]]);
        assert!(op_b(&m, [0, 1]).is_err());
    }

    #[test]
    fn op_c_example() {
        let m = op_c(&b4(), [0, 1, 2]).unwrap();
        assert_eq!((m.hypergraph.n(), m.hypergraph.m()), (6, 5));
        assert_eq!(
            m.hypergraph.edges(),
            &[vec![0, 1, 3], vec![2, 3], vec![0, 1, 2, 4], vec![0, 1, 2, 5], vec![4, 5]]
        );
        assert_eq!(m.hypergraph.edges_of_size(4), b4().hypergraph.edges_of_size(4) + 2);
        assert_eq!(m.hypergraph.edges_of_size(3), b4().hypergraph.edges_of_size(3) - 1);
        assert_eq!(m.hypergraph.edges_of_size(2), b4().hypergraph.edges_of_size(2) + 1);
        assert_eq!(tau_bruteforce(&m.hypergraph).unwrap().tau, 3);
        assert!(op_c(&op_a(), [0, 1, 2]).is_err());
    }

    #[test]
    fn op_d_example() {
        let m = f();
        assert_eq!((m.hypergraph.n(), m.hypergraph.m()), (5, 3));
        assert_eq!(
            m.hypergraph.edges(),
            &[vec![0, 1, 4], vec![2, 3, 4], vec![0, 1, 2, 3]]
        );
        let h = &m.hypergraph;
        assert_eq!(tau_bruteforce(h).unwrap().tau, 2);
        let weight = 6 * h.n() + 4 * h.edges_of_size(4) + 6 * h.edges_of_size(3) + 10 * h.edges_of_size(2) + 2;
        assert_eq!(weight, 48);
        assert_eq!(m.certificate.a_pairs, vec![[0, 1], [2, 3]]);
    }

    #[test]
    fn certificates_replay() {
        for m in [op_a(), b4(), f(), op_c(&b4(), [0, 1, 3]).unwrap()] {
            assert!(m.certificate.certifies(&m.hypergraph));
        }
    }

    #[test]
    fn replay_rejects_bad_certificates() {
        let bad = BCertificate::from_steps(vec![Step::A { x: 0, y: 1 }, Step::B { host: [0, 2], new: [3, 4] }]);
        assert!(matches!(bad.replay(), Err(Error::InvalidStep { step: 1, .. })));
        let two = BCertificate::from_steps(vec![Step::A { x: 0, y: 1 }, Step::A { x: 2, y: 3 }]);
        assert!(two.replay().is_err());
        let same = BCertificate::from_steps(vec![
            Step::A { x: 0, y: 1 },
            Step::D { left: [0, 1], right: [0, 1], new: 2 },
        ]);
        assert!(same.replay().is_err());
        let mut wrong_pairs = f().certificate;
        wrong_pairs.a_pairs.pop();
        assert!(wrong_pairs.replay().is_err());
    }

    #[test]
    fn generation_small_cases() {
        let two = generate_all_b(2).unwrap();
        assert_eq!(two.len(), 1);
        let four = generate_all_b(4).unwrap();
        assert_eq!(four.len(), 2);
        assert!(crate::canon::is_isomorphic(&four[1].hypergraph, &b4().hypergraph));
        assert!(generate_all_b(1).is_err());
    }

    #[test]
    fn recognition_examples() {
        let r = Recognizer::new();
        assert_eq!(r.recognize(&op_a().hypergraph).unwrap().unwrap().kinds(), "A");
        let h4 = Hypergraph::new(4, [vec![0, 1, 2, 3]]).unwrap();
        assert!(r.recognize(&h4).unwrap().is_none());
        let cert = r.recognize(&f().hypergraph).unwrap().unwrap();
        assert_eq!(cert.kinds(), "AAD");
        assert!(cert.certifies(&f().hypergraph));
    }

    #[test]
    fn recognition_of_relabelled_member() {
        let m = op_c(&b4(), [0, 1, 2]).unwrap();
        let h = m.hypergraph.relabel(&[4, 0, 5, 2, 1, 3]);
        let cert = Recognizer::new().recognize(&h).unwrap().unwrap();
        assert!(cert.certifies(&h));
    }

    #[test]
    fn recognition_limit_is_explicit() {
        let m = b4();
        let r = Recognizer::with_limit(3);
        assert!(matches!(r.recognize(&m.hypergraph), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lemma5_on_small_members() {
        let solver = Solver::new();
        for m in [op_a(), b4(), f()] {
            let report = verify_lemma5(&m, &solver).unwrap();
            assert!(report.all_pass(), "{report:?}");
            assert_eq!(report.checks.len(), 13);
        }
        assert_eq!(verify_lemma5(&f(), &solver).unwrap().tau, 2);
    }

    #[test]
    fn lemma5_rejects_mismatched_certificate() {
        let mut m = b4();
        m.hypergraph = op_a().hypergraph;
        assert_eq!(verify_lemma5(&m, &Solver::new()).unwrap_err(), Error::CertificateMismatch);
    }

    #[test]
    fn a_pair_law_on_b4() {
        // No τ-set of B(H2) holds both 0 and 1; every other pair works.
        let h = b4().hypergraph;
        for s in 0..4 {
            for t in s + 1..4 {
                let both = crate::solver::tau_bruteforce_constrained(&h, &Constraints::include([s, t])).unwrap();
                assert_eq!(both.tau == 2, (s, t) != (0, 1));
            }
        }
    }
}
