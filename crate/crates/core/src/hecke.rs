//! Hecke operator patterns and their reduced dual graphs.
//!
//! Text format: a header `hecke <d> <D> <p> <q>` followed by `d` rows of `d`
//! nonnegative integers. Blank lines and lines starting with `#` are skipped.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckePattern {
    pub d: usize,
    pub matrix: Vec<Vec<u64>>,
    /// `(D, p, q)`.
    pub labels: [i64; 3],
}

impl HeckePattern {
    pub fn new(matrix: Vec<Vec<u64>>, labels: [i64; 3]) -> Result<Self> {
        let d = matrix.len();
        if d == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if let Some(i) = matrix.iter().position(|row| row.len() != d) {
            return Err(Error::InvalidInput(format!("row {i} does not have {d} entries")));
        }
        for i in 0..d {
            for j in 0..i {
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(Error::InvalidInput(format!(
                        "support is not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                        matrix[i][j], matrix[j][i]
                    )));
                }
            }
        }
        Ok(HeckePattern { d, matrix, labels })
    }
}

pub fn parse_hecke(text: &str) -> Result<HeckePattern> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "hecke" {
        return Err(Error::Parse { line: hl, msg: "expected `hecke <d> <D> <p> <q>`".into() });
    }
    let d: usize = fields[1]
        .parse()
        .map_err(|_| Error::Parse { line: hl, msg: format!("bad dimension `{}`", fields[1]) })?;
    let mut labels = [0i64; 3];
    for (slot, f) in labels.iter_mut().zip(&fields[2..]) {
        *slot = f.parse().map_err(|_| Error::Parse { line: hl, msg: format!("bad label `{f}`") })?;
    }
    let mut matrix = Vec::with_capacity(d);
    for (ln, line) in lines {
        if matrix.len() == d {
            return Err(Error::Parse { line: ln, msg: format!("more than {d} rows") });
        }
        let row = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| Error::Parse { line: ln, msg: format!("`{t}` is not a nonnegative integer") })
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != d {
            return Err(Error::Parse { line: ln, msg: format!("expected {d} entries, found {}", row.len()) });
        }
        matrix.push(row);
    }
    if matrix.len() != d {
        return Err(Error::Parse { line: hl, msg: format!("expected {d} rows, found {}", matrix.len()) });
    }
    HeckePattern::new(matrix, labels)
}

/// Bipartite graph on `2d` vertices with an edge `i -- d + j` whenever entry
/// `(i, j)` is nonzero; multiplicities are dropped.
pub fn reduced_dual_graph(h: &HeckePattern) -> MultiGraph {
    let d = h.d;
    let mut g = MultiGraph::new(2 * d);
    for i in 0..d {
        for j in 0..d {
            if h.matrix[i][j] != 0 {
                g.add_edge(i, d + j).expect("in range");
            }
        }
    }
    g
}
