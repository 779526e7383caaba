//! Plain-text graph and vertex-set formats.
//!
//! A graph file starts with a `n m` header followed by `m` edge lines
//! `u v`; `#` starts a comment anywhere in a line and blank lines are
//! skipped. Vertex sets are comma or whitespace separated indices.

use crate::engine::{Graph, VertexSet};
use crate::error::Error;

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}

fn parse_number(line: usize, column: usize, token: &str, what: &str) -> Result<usize, Error> {
    token.parse().map_err(|_| Error::Parse {
        line,
        column,
        message: format!("invalid {what} `{token}`"),
    })
}

/// Parses the `n m` header plus `m` edge lines. Duplicate edges are
/// tolerated; anything else out of shape reports its line and column.
pub fn parse_graph(text: &str) -> Result<Graph, Error> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            let (column, _) = toks[toks.len().min(3) - 1];
            return Err(Error::Parse {
                line,
                column,
                message: format!("expected two fields, found {}", toks.len()),
            });
        }
        let (ca, a) = toks[0];
        let (cb, b) = toks[1];
        match header {
            None => {
                let n = parse_number(line, ca, a, "vertex count")?;
                let m = parse_number(line, cb, b, "edge count")?;
                if n == 0 {
                    return Err(Error::Parse {
                        line,
                        column: ca,
                        message: "vertex count must be positive".to_string(),
                    });
                }
                header = Some((n, m));
            }
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(Error::Parse {
                        line,
                        column: ca,
                        message: format!("unexpected content after {m} edges"),
                    });
                }
                let u = parse_number(line, ca, a, "vertex")?;
                let v = parse_number(line, cb, b, "vertex")?;
                for (column, w) in [(ca, u), (cb, v)] {
                    if w >= n {
                        return Err(Error::Parse {
                            line,
                            column,
                            message: format!("vertex {w} out of range for {n} vertices"),
                        });
                    }
                }
                edges.push((u, v));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: "missing `n m` header".to_string(),
        });
    };
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line.max(1),
            column: 1,
            message: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, &edges)
}

/// Canonical text form: header line, then the edges sorted ascending.
pub fn format_graph(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.vertex_count(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses comma or whitespace separated vertex indices into a set over
/// `universe` vertices. An empty text is the empty set.
pub fn parse_vertex_set(text: &str, universe: usize) -> Result<VertexSet, Error> {
    let mut set = VertexSet::empty(universe);
    let mut start = None;
    let mut items: Vec<(usize, &str)> = Vec::new();
    for (i, c) in text.char_indices() {
        if c == ',' || c.is_whitespace() {
            if let Some(s) = start.take() {
                items.push((s + 1, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        items.push((s + 1, &text[s..]));
    }
    for (column, token) in items {
        let v = parse_number(1, column, token, "vertex")?;
        if v >= universe {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                universe,
            });
        }
        set.insert(v);
    }
    Ok(set)
}

pub fn format_vertex_set(set: &VertexSet) -> String {
    set.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
