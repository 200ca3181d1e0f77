//! Ages of automorphisms of admissible double covers C → R, read through the induced action on R.
//!
//! The deformation space splits into node smoothing lines and the per-component spaces of
//! quadratic differentials on R. The involution of an unmarked subcurve attached at one Q1 node
//! is a quasi-reflection τ ↦ -τ on that node line; it is quotiented first, so such a node
//! contributes the downstairs exponent (coordinate t = τ²) instead of the upstairs one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{diag_exponents, Case, CyclicAction};
use crate::error::{Error, Result};
use crate::exact::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeType {
    /// preimage is a single ramified point
    Q1,
    /// two preimages
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Fixed,
    Swapped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: NodeType,
    pub status: NodeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partner: Option<String>,
    /// eigenvalue exponent on the smoothing line of R
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub down: Option<Rat>,
    /// chosen square root upstairs, Q1 only
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub up: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub branch: u32,
    #[serde(default)]
    pub marks: u32,
    #[serde(default)]
    pub nodes: Vec<String>,
    /// order of the action on this component; absent or 1 means trivial
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    /// ("free", ℓ) or ("fixed", 1) for each orbit of branch points and swapped node slots
    #[serde(default)]
    pub orbits: Vec<(String, u32)>,
    /// name of a component exchanged with this one
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swapped_with: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverAutGraph {
    pub components: Vec<Component>,
    #[serde(default)]
    pub nodes: Vec<Node>,
    /// markings on the part of the curve not listed; absent means it carries some
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rest_marks: Option<u32>,
}

impl CoverAutGraph {
    pub fn from_json(s: &str) -> Result<CoverAutGraph> {
        serde_json::from_str(s).map_err(|e| Error::Graph(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub source: String,
    pub exponents: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverAge {
    pub total_age: Rat,
    pub contributions: Vec<Contribution>,
    pub is_quasi_reflection: bool,
    /// age after also quotienting rational bridge involutions
    pub age_mod_qr: Rat,
    pub noncanonical: bool,
    /// the cruder lower bound 1/2 + 1/3 stated for a rotating tail with r = 3, s = 1
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clause_bound: Option<Rat>,
}

fn gerr<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Graph(msg.into()))
}

fn frac(x: &Rat) -> Rat {
    x.frac()
}

fn label(c: &Component, idx: usize) -> String {
    c.name.clone().unwrap_or_else(|| format!("component {idx}"))
}

fn is_active(c: &Component) -> bool {
    c.ell.unwrap_or(1) >= 2
}

struct Graph<'a> {
    g: &'a CoverAutGraph,
    nodes: BTreeMap<&'a str, &'a Node>,
    /// node id -> components containing it
    ends: BTreeMap<&'a str, Vec<usize>>,
}

impl<'a> Graph<'a> {
    fn build(g: &'a CoverAutGraph) -> Result<Graph<'a>> {
        let mut nodes = BTreeMap::new();
        for n in &g.nodes {
            if nodes.insert(n.id.as_str(), n).is_some() {
                return gerr(format!("duplicate node {}", n.id));
            }
        }
        let mut ends: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, c) in g.components.iter().enumerate() {
            for id in &c.nodes {
                if !nodes.contains_key(id.as_str()) {
                    return gerr(format!("{} lists unknown node {id}", label(c, i)));
                }
                ends.entry(id.as_str()).or_default().push(i);
            }
        }
        for id in nodes.keys() {
            match ends.get(id).map(|v| v.len()) {
                Some(1) | Some(2) => {}
                _ => return gerr(format!("node {id} must lie on one or two listed components")),
            }
        }
        // acyclic: union-find over explicit edges
        let mut parent: Vec<usize> = (0..g.components.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (id, v) in &ends {
            if v.len() == 2 {
                let (a, b) = (find(&mut parent, v[0]), find(&mut parent, v[1]));
                if a == b {
                    return gerr(format!("node {id} closes a cycle; the target curve is a tree"));
                }
                parent[a] = b;
            }
        }
        Ok(Graph { g, nodes, ends })
    }

    /// Marking counts on the two sides of a node; None stands for the unlisted rest.
    fn side_marks(&self, id: &str) -> (Option<u32>, Option<u32>) {
        let v = &self.ends[id];
        let side = |start: usize| -> Option<u32> {
            let mut seen = BTreeSet::from([start]);
            let mut stack = vec![start];
            let mut marks = 0;
            let mut open = false;
            while let Some(c) = stack.pop() {
                marks += self.g.components[c].marks;
                for nid in &self.g.components[c].nodes {
                    if nid == id {
                        continue;
                    }
                    let e = &self.ends[nid.as_str()];
                    if e.len() == 1 {
                        open = true;
                    }
                    for &o in e {
                        if seen.insert(o) {
                            stack.push(o);
                        }
                    }
                }
            }
            if open {
                self.g.rest_marks.map(|r| r + marks)
            } else {
                Some(marks)
            }
        };
        let a = side(v[0]);
        let b = if v.len() == 2 { side(v[1]) } else { self.g.rest_marks };
        (a, b)
    }

    fn is_rational_bridge(&self, c: usize) -> bool {
        let comp = &self.g.components[c];
        comp.branch == 2
            && comp.marks == 0
            && comp.nodes.len() == 1
            && self.nodes[comp.nodes[0].as_str()].kind == NodeType::Q2
    }
}

/// None for a trivial action, Some(None) for a non-trivial action on a rigid component.
fn component_action(gr: &Graph, idx: usize) -> Result<Option<Option<CyclicAction>>> {
    let c = &gr.g.components[idx];
    let ell = c.ell.unwrap_or(1);
    if ell < 2 {
        if !c.orbits.is_empty() {
            return gerr(format!("{} has orbits but no action", label(c, idx)));
        }
        return Ok(None);
    }
    let mut fixed_nodes = 0;
    let mut swapped_nodes = 0;
    for id in &c.nodes {
        match gr.nodes[id.as_str()].status {
            NodeStatus::Fixed => fixed_nodes += 1,
            NodeStatus::Swapped => swapped_nodes += 1,
        }
    }
    let s = c.marks + fixed_nodes;
    let r = c.branch + swapped_nodes;
    let mut delta = 0;
    let mut total = 0;
    for (kind, size) in &c.orbits {
        match (kind.as_str(), *size) {
            ("fixed", 1) => delta += 1,
            ("free", sz) if sz == ell => {}
            _ => return gerr(format!("{}: orbit ({kind}, {size}) invalid for order {ell}", label(c, idx))),
        }
        total += size;
    }
    if total != r {
        return gerr(format!("{}: orbits cover {total} points, expected {r}", label(c, idx)));
    }
    let case = match (s, delta) {
        (0, 0) => Case::A1,
        (0, _) => Case::A2,
        (1, _) => Case::B,
        (2, _) => Case::C,
        _ => return gerr(format!("{}: a non-trivial action fixes at most two special points", label(c, idx))),
    };
    if r + s < 4 {
        // rigid component: no deformation space of its own
        return Ok(Some(None));
    }
    CyclicAction::new(case, r, s, ell, delta).map(|a| Some(Some(a))).map_err(|e| Error::Graph(format!("{}: {e}", label(c, idx))))
}

/// Full age computation for the automorphism described by the graph.
pub fn cover_age(g: &CoverAutGraph) -> Result<CoverAge> {
    let gr = Graph::build(g)?;
    let mut contributions = Vec::new();
    let mut mod_qr: Vec<Rat> = Vec::new();
    let mut actions: BTreeMap<usize, CyclicAction> = BTreeMap::new();

    for (i, c) in g.components.iter().enumerate() {
        match component_action(&gr, i)? {
            Some(Some(act)) => {
                let ex: Vec<Rat> = diag_exponents(&act).iter().map(|e| Rat::new(*e, act.ell)).collect();
                mod_qr.extend(ex.iter().cloned());
                contributions.push(Contribution { source: label(c, i), exponents: ex });
                actions.insert(i, act);
            }
            Some(None) => contributions.push(Contribution { source: label(c, i), exponents: Vec::new() }),
            None => {}
        }
    }

    // exchanged components: each pair gives d eigenvalues +1 and d eigenvalues -1
    let names: BTreeMap<&str, usize> =
        g.components.iter().enumerate().filter_map(|(i, c)| c.name.as_deref().map(|n| (n, i))).collect();
    let mut done = BTreeSet::new();
    for (i, c) in g.components.iter().enumerate() {
        let Some(p) = &c.swapped_with else { continue };
        let Some(&j) = names.get(p.as_str()) else { return gerr(format!("{} swapped with unknown {p}", label(c, i))) };
        let o = &g.components[j];
        if o.swapped_with.as_deref() != c.name.as_deref() || i == j {
            return gerr(format!("{} and {p} do not swap each other", label(c, i)));
        }
        if is_active(c) || is_active(o) || c.marks != 0 || o.marks != 0 {
            return gerr(format!("{} and {p}: exchanged components carry no markings and no own action", label(c, i)));
        }
        if (c.branch, c.nodes.len()) != (o.branch, o.nodes.len()) {
            return gerr(format!("{} and {p} are not isomorphic", label(c, i)));
        }
        if !done.insert(i.min(j)) {
            continue;
        }
        let d = (c.branch as i64 + c.nodes.len() as i64 - 3).max(0) as usize;
        let mut ex = vec![Rat::zero(); d];
        ex.extend(vec![Rat::half(); d]);
        mod_qr.extend(ex.iter().cloned());
        contributions.push(Contribution { source: format!("{} <-> {p}", label(c, i)), exponents: ex });
    }

    let mut seen_pairs = BTreeSet::new();
    for n in &g.nodes {
        match n.status {
            NodeStatus::Swapped => {
                let Some(p) = &n.partner else { return gerr(format!("swapped node {} has no partner", n.id)) };
                let Some(pn) = gr.nodes.get(p.as_str()) else { return gerr(format!("node {} partner {p} unknown", n.id)) };
                if pn.partner.as_deref() != Some(n.id.as_str()) || pn.status != NodeStatus::Swapped {
                    return gerr(format!("nodes {} and {p} are not swapped with each other", n.id));
                }
                if pn.kind != n.kind {
                    return gerr(format!("swapped nodes {} and {p} have different types", n.id));
                }
                let key = if n.id < *p { (n.id.clone(), p.clone()) } else { (p.clone(), n.id.clone()) };
                if seen_pairs.insert(key) {
                    let ex = vec![Rat::zero(), Rat::half()];
                    mod_qr.extend(ex.iter().cloned());
                    contributions.push(Contribution { source: format!("nodes {} <-> {p}", n.id), exponents: ex });
                }
            }
            NodeStatus::Fixed => {
                let Some(down) = &n.down else { return gerr(format!("node {} lacks its downstairs eigenvalue", n.id)) };
                let (e, eq) = match n.kind {
                    NodeType::Q1 => {
                        let Some(up) = &n.up else { return gerr(format!("Q1 node {} lacks the upstairs square root", n.id)) };
                        if frac(&(up * Rat::int(2))) != frac(down) {
                            return gerr(format!("node {}: ({up})*2 is not {down} mod 1", n.id));
                        }
                        let (a, b) = gr.side_marks(&n.id);
                        let inessential = a == Some(0) || b == Some(0);
                        let e = if inessential { frac(down) } else { frac(up) };
                        (e.clone(), e)
                    }
                    NodeType::Q2 => {
                        let e = frac(down);
                        let bridge = gr.ends[n.id.as_str()].iter().any(|&c| gr.is_rational_bridge(c));
                        let q = if bridge { frac(&(down * Rat::int(2))) } else { e.clone() };
                        (e, q)
                    }
                };
                mod_qr.push(eq);
                contributions.push(Contribution { source: format!("node {}", n.id), exponents: vec![e] });
            }
        }
    }

    let all: Vec<&Rat> = contributions.iter().flat_map(|c| c.exponents.iter()).collect();
    let total_age: Rat = all.iter().copied().sum();
    let is_quasi_reflection = all.iter().filter(|e| !e.is_zero()).count() == 1;
    let age_mod_qr: Rat = mod_qr.iter().sum();

    // rotating unmarked tail: three branch points in one Z/3 orbit, one fixed Q1 node
    let tail = g.components.iter().enumerate().find(|(i, c)| {
        c.marks == 0
            && c.nodes.len() == 1
            && c.branch == 3
            && c.ell == Some(3)
            && c.orbits == vec![("free".to_string(), 3)]
            && actions.contains_key(i)
            && {
                let nd = gr.nodes[c.nodes[0].as_str()];
                nd.kind == NodeType::Q1 && nd.status == NodeStatus::Fixed
            }
    });
    let (noncanonical, clause_bound) = match tail {
        Some((i, c)) => {
            let act = &actions[&i];
            let own: Rat = diag_exponents(act).iter().map(|e| Rat::new(*e, act.ell)).sum();
            let node = frac(gr.nodes[c.nodes[0].as_str()].down.as_ref().unwrap());
            // everything else trivial once quasi-reflections are quotiented
            (age_mod_qr == own + node, Some(Rat::half() + Rat::new(1, 3)))
        }
        None => (false, None),
    };
    Ok(CoverAge { total_age, contributions, is_quasi_reflection, age_mod_qr, noncanonical, clause_bound })
}

pub fn cover_total_age(g: &CoverAutGraph) -> Result<Rat> {
    Ok(cover_age(g)?.total_age)
}

/// True iff the graph has an unmarked tail with the order-3 single-orbit action at a fixed Q1 node
/// and the automorphism is trivial elsewhere modulo quasi-reflections.
pub fn is_noncanonical_cover(g: &CoverAutGraph) -> Result<bool> {
    Ok(cover_age(g)?.noncanonical)
}
