//! Edge-list and DIMACS readers and writers.
//!
//! Edge lists carry one `u v` pair per line; `#` starts a comment line. Vertex
//! labels are arbitrary nonnegative integers and are remapped to dense ids in
//! ascending label order. DIMACS files use `p edge <n> <m>` and 1-based
//! `e <u> <v>` lines; `c` lines are comments.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{BuildReport, SimpleGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    EdgeList,
    Dimacs,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edgelist" | "edges" => Ok(Format::EdgeList),
            "dimacs" => Ok(Format::Dimacs),
            other => Err(format!("unknown format `{other}` (expected edgelist or dimacs)")),
        }
    }
}

/// A parsed graph together with the original label of every dense id.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGraph {
    pub graph: SimpleGraph,
    pub labels: Vec<u64>,
    pub report: BuildReport,
}

impl ParsedGraph {
    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }
}

pub fn parse_graph(bytes: &[u8], format: Format, strict: bool) -> Result<ParsedGraph> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse { line: 0, msg: format!("input is not UTF-8: {e}") })?;
    match format {
        Format::EdgeList => parse_edge_list(text, strict),
        Format::Dimacs => parse_dimacs(text, strict),
    }
}

fn parse_id(token: Option<&str>, line: usize) -> Result<u64> {
    let token = token.ok_or_else(|| Error::Parse { line, msg: "expected two vertex ids".into() })?;
    token.parse::<u64>().map_err(|_| Error::Parse { line, msg: format!("`{token}` is not a nonnegative integer") })
}

fn parse_edge_list(text: &str, strict: bool) -> Result<ParsedGraph> {
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with("p ") || line.starts_with("e ") || line == "p" {
            return Err(Error::FormatMismatch { expected: "an edge list", msg: format!("line {lineno} looks like DIMACS") });
        }
        let mut tokens = line.split_whitespace();
        let u = parse_id(tokens.next(), lineno)?;
        let v = parse_id(tokens.next(), lineno)?;
        if tokens.next().is_some() {
            return Err(Error::Parse { line: lineno, msg: "trailing tokens after edge".into() });
        }
        raw.push((u, v));
    }
    let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let dense = |x: u64| labels.binary_search(&x).expect("label collected above");
    let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v)| (dense(u), dense(v))).collect();
    let (graph, report) = SimpleGraph::from_edges(labels.len(), &edges, strict)?;
    Ok(ParsedGraph { graph, labels, report })
}

fn parse_dimacs(text: &str, strict: bool) -> Result<ParsedGraph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse { line: lineno, msg: "duplicate problem line".into() });
                }
                if tokens.next() != Some("edge") {
                    return Err(Error::Parse { line: lineno, msg: "expected `p edge <n> <m>`".into() });
                }
                let count = parse_id(tokens.next(), lineno)? as usize;
                parse_id(tokens.next(), lineno)?;
                n = Some(count);
            }
            Some("e") => {
                let count = n.ok_or_else(|| Error::Parse { line: lineno, msg: "edge before problem line".into() })?;
                let u = parse_id(tokens.next(), lineno)? as usize;
                let v = parse_id(tokens.next(), lineno)? as usize;
                for x in [u, v] {
                    if x == 0 || x > count {
                        return Err(Error::Parse { line: lineno, msg: format!("vertex {x} outside 1..={count}") });
                    }
                }
                edges.push((u - 1, v - 1));
            }
            Some(tok) if tok.parse::<u64>().is_ok() && n.is_none() => {
                return Err(Error::FormatMismatch { expected: "DIMACS", msg: format!("line {lineno} looks like an edge list") });
            }
            Some(tok) => return Err(Error::Parse { line: lineno, msg: format!("unknown line type `{tok}`") }),
            None => unreachable!("blank lines skipped"),
        }
    }
    let n = n.ok_or(Error::FormatMismatch { expected: "DIMACS", msg: "missing `p edge` line".into() })?;
    let (graph, report) = SimpleGraph::from_edges(n, &edges, strict)?;
    Ok(ParsedGraph { graph, labels: (1..=n as u64).collect(), report })
}

/// Writes `g` using its dense ids, edges sorted with `u < v`.
pub fn serialize(g: &SimpleGraph, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::EdgeList => {
            for (u, v) in g.edges() {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
        Format::Dimacs => {
            writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
            for (u, v) in g.edges() {
                writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
            }
        }
    }
    out
}
