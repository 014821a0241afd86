//! Decorated dual graphs of Q-resolutions.
//!
//! A vertex is either an exceptional divisor component or a strict-transform
//! arrow. Exceptional vertices carry a multiplicity, a self-intersection, a
//! genus and the list of quotient-singular points of the ambient surface
//! lying on them away from the other components. Edges record double points
//! together with the local quotient type at the point.
//!
//! Orientation convention for edge and sing0 types: a type (d; a, b) on an
//! edge means v1 is the divisor along {x = 0} and v2 the one along {y = 0};
//! a sing0 type places its owner along {y = 0}. Types are stored normalized
//! with a = 1, which the convention makes canonical.

use crate::arith::{qq_opt_serde, QQ};
use crate::error::{Error, Result};
use crate::quotient::CyclicType;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    #[serde(rename = "exceptional")]
    Exceptional,
    #[serde(rename = "strict-arrow")]
    StrictArrow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
    /// Multiplicity in the total transform. Rational in general: over a
    /// quotient ambient the pullback is a Q-divisor. Absent on vertices that
    /// carry no transform data, such as Hirzebruch-Jung chain curves.
    #[serde(with = "qq_opt_serde", default)]
    pub m: Option<QQ>,
    #[serde(
        with = "qq_opt_serde",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub self_int: Option<QQ>,
    #[serde(default)]
    pub genus: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sing0: Vec<CyclicType>,
    /// Input branch indices (1-based) carried by a strict-transform arrow.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branch: Vec<usize>,
}

impl Vertex {
    pub fn is_exceptional(&self) -> bool {
        self.kind == VertexKind::Exceptional
    }

    pub fn is_arrow(&self) -> bool {
        self.kind == VertexKind::StrictArrow
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub v1: usize,
    pub v2: usize,
    #[serde(rename = "type")]
    pub ty: CyclicType,
}

impl Edge {
    /// Index of the double point the edge records. Stored types are
    /// normalized, so the index is the order itself.
    pub fn index(&self) -> i64 {
        self.ty.index().unwrap_or(self.ty.d())
    }

    pub fn touches(&self, id: usize) -> bool {
        self.v1 == id || self.v2 == id
    }

    pub fn other(&self, id: usize) -> usize {
        if self.v1 == id {
            self.v2
        } else {
            self.v1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl DualGraph {
    pub fn vertex(&self, id: usize) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// Exceptional vertex ids in id order. This is the row order of every
    /// matrix indexed by the graph.
    pub fn exceptional_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .vertices
            .iter()
            .filter(|v| v.is_exceptional())
            .map(|v| v.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn edges_at(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.touches(id))
    }

    /// Arrow vertex carrying the given 1-based input branch index, together
    /// with its unique incident edge.
    pub fn arrow_for_branch(&self, branch: usize) -> Result<(&Vertex, &Edge)> {
        let v = self
            .vertices
            .iter()
            .find(|v| v.is_arrow() && v.branch.contains(&branch))
            .ok_or_else(|| Error::DetachedBranch(format!("no arrow carries branch {branch}")))?;
        let edge = self.edges_at(v.id).next().ok_or_else(|| {
            Error::DetachedBranch(format!("branch {branch} never met an exceptional divisor"))
        })?;
        Ok((v, edge))
    }

    /// Structural well-formedness: unique ids, edges between existing
    /// vertices with v1 < v2, arrows of degree one hanging off exceptional
    /// vertices, self-intersections exactly on exceptional vertices.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id) {
                return Err(Error::MalformedGraph(format!(
                    "duplicate vertex id {}",
                    v.id
                )));
            }
            match v.kind {
                VertexKind::Exceptional => {
                    if v.self_int.is_none() {
                        return Err(Error::MalformedGraph(format!(
                            "exceptional vertex {} lacks a self-intersection",
                            v.id
                        )));
                    }
                    if !v.branch.is_empty() {
                        return Err(Error::MalformedGraph(format!(
                            "exceptional vertex {} carries branch tags",
                            v.id
                        )));
                    }
                }
                VertexKind::StrictArrow => {
                    if v.self_int.is_some() || !v.sing0.is_empty() || v.genus != 0 {
                        return Err(Error::MalformedGraph(format!(
                            "arrow {} carries divisor data",
                            v.id
                        )));
                    }
                    // Degree 0 happens when the branch was already a
                    // Q-normal crossing and nothing was blown up.
                    let deg = self.edges_at(v.id).count();
                    if deg > 1 {
                        return Err(Error::MalformedGraph(format!(
                            "arrow {} has degree {deg}, expected at most 1",
                            v.id
                        )));
                    }
                }
            }
        }
        for e in &self.edges {
            if e.v1 >= e.v2 {
                return Err(Error::MalformedGraph(format!(
                    "edge ({}, {}) is not ordered v1 < v2",
                    e.v1, e.v2
                )));
            }
            let (a, b) = match (self.vertex(e.v1), self.vertex(e.v2)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::MalformedGraph(format!(
                        "edge ({}, {}) references a missing vertex",
                        e.v1, e.v2
                    )))
                }
            };
            if a.is_arrow() && b.is_arrow() {
                return Err(Error::MalformedGraph(format!(
                    "edge ({}, {}) joins two arrows",
                    e.v1, e.v2
                )));
            }
            if a.is_arrow() {
                return Err(Error::MalformedGraph(format!(
                    "edge ({}, {}) has the arrow as v1",
                    e.v1, e.v2
                )));
            }
        }
        Ok(())
    }

    /// DOT rendering. Divisor-divisor edges are undirected; strict
    /// transforms are drawn as arrowheads leaving their divisor.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph resolution {\n");
        for v in &self.vertices {
            match v.kind {
                VertexKind::Exceptional => {
                    let m = match &v.m {
                        Some(m) => format_qq(m),
                        None => "?".to_string(),
                    };
                    let e = v.self_int.as_ref().map(format_qq).unwrap_or_default();
                    let sing: Vec<String> = v.sing0.iter().map(|t| t.to_string()).collect();
                    let _ = writeln!(
                        out,
                        "  n{} [shape=circle, label=\"E_{}: m={}, e={}, g={}, sing0=[{}]\"];",
                        v.id,
                        v.id,
                        m,
                        e,
                        v.genus,
                        sing.join(", ")
                    );
                }
                VertexKind::StrictArrow => {
                    let tags: Vec<String> = v.branch.iter().map(|b| format!("C{b}")).collect();
                    let _ = writeln!(
                        out,
                        "  n{} [shape=plaintext, label=\"{}\"];",
                        v.id,
                        tags.join(",")
                    );
                }
            }
        }
        for e in &self.edges {
            let head = self.vertex(e.v2).map(|v| v.is_arrow()).unwrap_or(false);
            let dir = if head { "forward" } else { "none" };
            let _ = writeln!(
                out,
                "  n{} -> n{} [dir={}, label=\"{}\"];",
                e.v1, e.v2, dir, e.ty
            );
        }
        out.push_str("}\n");
        out
    }
}

/// The graph describes a Q-normal crossing configuration: structurally well
/// formed, and the divisibility laws hold wherever multiplicities are
/// integral. (Over a quotient ambient the pullback multiplicities may be
/// honest fractions; divisibility is a statement about invariant functions
/// and is skipped there.)
pub(crate) fn q_normal_crossing(graph: &DualGraph) -> bool {
    if graph.validate().is_err() {
        return false;
    }
    let int_m = |id: usize| -> Option<i64> {
        graph
            .vertex(id)
            .and_then(|v| v.m.as_ref())
            .and_then(crate::arith::as_i64)
    };
    for v in &graph.vertices {
        if let Some(m) = int_m(v.id) {
            for t in &v.sing0 {
                let d = t.index().unwrap_or(t.d());
                if m % d != 0 {
                    return false;
                }
            }
        }
    }
    for e in &graph.edges {
        let (m1, m2) = (int_m(e.v1), int_m(e.v2));
        if let (Some(m1), Some(m2)) = (m1, m2) {
            let d = e.ty.d() as i128;
            let s = e.ty.a() as i128 * m1 as i128 + e.ty.b() as i128 * m2 as i128;
            if s.rem_euclid(d) != 0 {
                return false;
            }
        }
    }
    true
}

fn format_qq(q: &QQ) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// True when the rational is a positive integer (arrows and reduced total
/// transforms); multiplicities over quotient ambients may fail this.
pub fn is_positive_integer(q: &QQ) -> bool {
    q.is_integer() && *q >= QQ::one()
}
