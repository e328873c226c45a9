//! The line-oriented `.rcg` instance format.
//!
//! ```text
//! c optional comments anywhere
//! p rcg <vertices> <arcs> <delta> <budget>
//! s <start>
//! z <target>
//! a <tail> <head> <label> <traversal>     (one line per arc, k-th line is arc k)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{ArcSpec, GraphError, RcgInstance, TemporalGraph, Time, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct InstanceParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `p rcg` header")]
    MissingHeader,
    #[error("malformed header, expected `p rcg <V> <A> <delta> <budget>`")]
    MalformedHeader,
    #[error("`{0}` is not a decimal integer")]
    BadInteger(String),
    #[error("expected {expected} fields after `{tag}`, found {found}")]
    FieldCount { tag: char, expected: usize, found: usize },
    #[error("unknown line tag `{0}`")]
    UnknownTag(String),
    #[error("duplicate `{0}` line")]
    Duplicate(char),
    #[error("`{0}` line must precede all arc lines")]
    EndpointAfterArcs(char),
    #[error("missing `{0}` line")]
    MissingEndpoint(char),
    #[error("vertex {vertex} is outside 1..={count}")]
    DanglingVertex { vertex: u64, count: u32 },
    #[error("self-loop at vertex {0}")]
    SelfLoop(u64),
    #[error("arc {field} must be at least 1")]
    NonPositive { field: &'static str },
    #[error("delta must be at least 1")]
    NonPositiveDelta,
    #[error("budget {budget} exceeds the arc count {arcs}")]
    BudgetTooLarge { budget: u64, arcs: u64 },
    #[error("header declares {declared} arcs but {found} arc lines were given")]
    ArcCountMismatch { declared: u64, found: u64 },
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("{0}")]
    Invalid(GraphError),
}

fn err(line: usize, kind: ParseErrorKind) -> InstanceParseError {
    InstanceParseError { line, kind }
}

fn int(line: usize, tok: &str) -> Result<u64, InstanceParseError> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(line, ParseErrorKind::BadInteger(tok.to_string())));
    }
    tok.parse().map_err(|_| err(line, ParseErrorKind::BadInteger(tok.to_string())))
}

fn fields(line: usize, tag: char, rest: &[&str], expected: usize) -> Result<Vec<u64>, InstanceParseError> {
    if rest.len() != expected {
        return Err(err(line, ParseErrorKind::FieldCount { tag, expected, found: rest.len() }));
    }
    rest.iter().map(|t| int(line, t)).collect()
}

struct Header {
    vertices: u32,
    arcs: u64,
    delta: Time,
    budget: u64,
}

pub fn parse_instance(text: &str) -> Result<RcgInstance, InstanceParseError> {
    let mut header: Option<Header> = None;
    let mut start: Option<u64> = None;
    let mut target: Option<u64> = None;
    let mut specs = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = toks.first() else { continue };
        if tag == "c" {
            continue;
        }
        let rest = &toks[1..];
        let Some(h) = header.as_ref() else {
            if tag != "p" {
                return Err(err(line, ParseErrorKind::MissingHeader));
            }
            if rest.len() != 5 || rest[0] != "rcg" {
                return Err(err(line, ParseErrorKind::MalformedHeader));
            }
            let v = fields(line, 'p', &rest[1..], 4)?;
            let vertices = u32::try_from(v[0]).map_err(|_| err(line, ParseErrorKind::MalformedHeader))?;
            if vertices == 0 {
                return Err(err(line, ParseErrorKind::NoVertices));
            }
            if v[2] == 0 {
                return Err(err(line, ParseErrorKind::NonPositiveDelta));
            }
            if v[3] > v[1] {
                return Err(err(line, ParseErrorKind::BudgetTooLarge { budget: v[3], arcs: v[1] }));
            }
            header = Some(Header { vertices, arcs: v[1], delta: v[2], budget: v[3] });
            continue;
        };
        let vertex = |x: u64| -> Result<u32, InstanceParseError> {
            if x == 0 || x > h.vertices as u64 {
                Err(err(line, ParseErrorKind::DanglingVertex { vertex: x, count: h.vertices }))
            } else {
                Ok(x as u32)
            }
        };
        match tag {
            "p" => return Err(err(line, ParseErrorKind::Duplicate('p'))),
            "s" | "z" => {
                let c = if tag == "s" { 's' } else { 'z' };
                if !specs.is_empty() {
                    return Err(err(line, ParseErrorKind::EndpointAfterArcs(c)));
                }
                let slot = if c == 's' { &mut start } else { &mut target };
                if slot.is_some() {
                    return Err(err(line, ParseErrorKind::Duplicate(c)));
                }
                let v = fields(line, c, rest, 1)?;
                vertex(v[0])?;
                *slot = Some(v[0]);
            }
            "a" => {
                if start.is_none() {
                    return Err(err(line, ParseErrorKind::MissingEndpoint('s')));
                }
                if target.is_none() {
                    return Err(err(line, ParseErrorKind::MissingEndpoint('z')));
                }
                let v = fields(line, 'a', rest, 4)?;
                let (tail, head) = (vertex(v[0])?, vertex(v[1])?);
                if tail == head {
                    return Err(err(line, ParseErrorKind::SelfLoop(v[0])));
                }
                if v[2] == 0 {
                    return Err(err(line, ParseErrorKind::NonPositive { field: "label" }));
                }
                if v[3] == 0 {
                    return Err(err(line, ParseErrorKind::NonPositive { field: "traversal" }));
                }
                if specs.len() as u64 == h.arcs {
                    return Err(err(line, ParseErrorKind::ArcCountMismatch { declared: h.arcs, found: h.arcs + 1 }));
                }
                specs.push(ArcSpec::new(tail, head, v[2], v[3]));
            }
            other => return Err(err(line, ParseErrorKind::UnknownTag(other.to_string()))),
        }
    }

    let end = last_line.max(1);
    let h = header.ok_or(err(end, ParseErrorKind::MissingHeader))?;
    let start = start.ok_or(err(end, ParseErrorKind::MissingEndpoint('s')))?;
    let target = target.ok_or(err(end, ParseErrorKind::MissingEndpoint('z')))?;
    if specs.len() as u64 != h.arcs {
        return Err(err(end, ParseErrorKind::ArcCountMismatch { declared: h.arcs, found: specs.len() as u64 }));
    }
    let graph = TemporalGraph::new(h.vertices, specs).map_err(|e| err(end, ParseErrorKind::Invalid(e)))?;
    RcgInstance::new(graph, VertexId(start as u32), VertexId(target as u32), h.budget as usize, h.delta)
        .map_err(|e| err(end, ParseErrorKind::Invalid(e)))
}

/// Canonical text form: header, endpoints, arcs in id order, no comments.
pub fn serialize_instance(inst: &RcgInstance) -> String {
    let g = inst.graph();
    let mut out = String::new();
    let _ = writeln!(out, "p rcg {} {} {} {}", g.vertex_count(), g.arc_count(), inst.delta(), inst.budget());
    let _ = writeln!(out, "s {}", inst.start());
    let _ = writeln!(out, "z {}", inst.target());
    for a in g.arcs() {
        let _ = writeln!(out, "a {} {} {} {}", a.tail, a.head, a.label, a.traversal);
    }
    out
}
