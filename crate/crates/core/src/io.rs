//! Plain-text graph format.
//!
//! ```text
//! mgraph <V> <E>
//! u v            (E lines, 0-based; loops as `u u`, parallel edges repeated)
//! p0 p1 ...      (optional: vertex permutation of an involution)
//! q0 q1 ...      (optional: edge permutation, by edge line order)
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::involution::Involution;

#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: MultiGraph,
    pub involution: Option<Involution>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| parse_err(line_no, format!("`{t}`: {e}"))))
        .collect()
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("mgraph") {
        return Err(parse_err(hline, "expected `mgraph <V> <E>` header"));
    }
    let counts = parse_numbers(hline, &parts.collect::<Vec<_>>().join(" "))?;
    let [v, e] = counts[..] else {
        return Err(parse_err(hline, "header needs exactly two counts"));
    };
    let mut graph = MultiGraph::new(v);
    for _ in 0..e {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {e} edge lines")))?;
        let nums = parse_numbers(ln, l)?;
        let [a, b] = nums[..] else {
            return Err(parse_err(ln, "edge line needs two vertices"));
        };
        graph.add_edge(a, b).map_err(|err| parse_err(ln, err.to_string()))?;
    }
    let involution = match lines.next() {
        None => None,
        Some((ln, vl)) => {
            let vperm = parse_numbers(ln, vl)?;
            let eperm = match lines.next() {
                Some((ln2, el)) => parse_numbers(ln2, el)?,
                None if e == 0 => Vec::new(),
                None => return Err(parse_err(ln, "vertex permutation without edge permutation")),
            };
            Some(
                Involution::new(graph.clone(), vperm, eperm)
                    .map_err(|err| parse_err(ln, err.to_string()))?,
            )
        }
    };
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content"));
    }
    Ok(GraphFile { graph, involution })
}

/// Reads a standalone involution file (two permutation lines) for `graph`.
pub fn parse_involution(graph: &MultiGraph, text: &str) -> Result<Involution> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if rows.first().is_some_and(|(_, l)| l.starts_with("mgraph")) {
        return parse_graph(text)?
            .involution
            .ok_or_else(|| parse_err(1, "graph file carries no involution"));
    }
    let vperm = rows
        .first()
        .map(|&(ln, l)| parse_numbers(ln, l))
        .transpose()?
        .unwrap_or_default();
    match rows.get(1) {
        Some(&(ln, l)) => Involution::new(graph.clone(), vperm, parse_numbers(ln, l)?),
        // vertex permutation only: use the canonical edge action
        None => {
            if vperm.len() != graph.vertex_count() {
                return Err(Error::InvalidInvolution(format!(
                    "expected {} vertex images, got {}",
                    graph.vertex_count(),
                    vperm.len()
                )));
            }
            Involution::from_vertex_perm(graph, vperm)
                .ok_or_else(|| Error::InvalidInvolution("vertex permutation is not an automorphism of order 2".into()))
        }
    }
}

pub fn write_graph(graph: &MultiGraph, involution: Option<&Involution>) -> String {
    let mut out = String::new();
    writeln!(out, "mgraph {} {}", graph.vertex_count(), graph.edge_count()).unwrap();
    for e in graph.edges() {
        writeln!(out, "{} {}", e.ends[0], e.ends[1]).unwrap();
    }
    if let Some(inv) = involution {
        out.push_str(&join(inv.vertex_perm()));
        out.push('\n');
        out.push_str(&join(inv.edge_perm()));
        out.push('\n');
    }
    out
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}
