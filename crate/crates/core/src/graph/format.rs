//! Plain-text graph files.
//!
//! ```text
//! # comments start with '#', blank lines are ignored
//! n [L]                 header; L defaults to n
//! ring: l1 l2 ... ln    a ring, labels in cyclic order
//! ```
//!
//! or, for an arbitrary connected graph,
//!
//! ```text
//! n [L]
//! u v                   one undirected edge per line, nodes are 0-based
//! label u l             the label of node u, one line per node
//! ```
//!
//! Edge and label lines may be interleaved. A file uses either the `ring:`
//! form or the edge-list form, never both.

use std::fmt::Write as _;

use thiserror::Error;

use super::{build_ring, GraphError, Label, LabeledGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut header: Option<(usize, Label)> = None;
    let mut ring: Option<(usize, Vec<Label>)> = None;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut labels: Vec<Option<Label>> = Vec::new();
    let mut first_edge_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((n, _)) = header else {
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.is_empty() || toks.len() > 2 {
                return Err(syntax(line, "header must be `n` or `n L`"));
            }
            let n: usize = number(toks[0], line, "node count")?;
            let bound = match toks.get(1) {
                Some(t) => number(t, line, "label bound")?,
                None => n as Label,
            };
            header = Some((n, bound));
            labels = vec![None; n];
            continue;
        };
        if let Some(rest) = content.strip_prefix("ring:") {
            if ring.is_some() {
                return Err(syntax(line, "second `ring:` line"));
            }
            let ls = rest
                .split_whitespace()
                .map(|t| number(t, line, "label"))
                .collect::<Result<Vec<Label>, _>>()?;
            if ls.len() != n {
                return Err(syntax(
                    line,
                    format!("ring lists {} labels but header says {n}", ls.len()),
                ));
            }
            ring = Some((line, ls));
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            ["label", u, l] => {
                let u: NodeId = number(u, line, "node id")?;
                let l: Label = number(l, line, "label")?;
                if u >= n {
                    return Err(syntax(line, format!("node {u} out of range 0..{n}")));
                }
                if labels[u].replace(l).is_some() {
                    return Err(syntax(line, format!("node {u} labelled twice")));
                }
                first_edge_line.get_or_insert(line);
            }
            [u, v] => {
                let u: NodeId = number(u, line, "node id")?;
                let v: NodeId = number(v, line, "node id")?;
                if u >= n || v >= n {
                    return Err(syntax(line, format!("edge {u} {v} out of range 0..{n}")));
                }
                edges.push((u, v));
                first_edge_line.get_or_insert(line);
            }
            _ => return Err(syntax(line, format!("unrecognised line `{content}`"))),
        }
    }

    let Some((n, bound)) = header else {
        return Err(syntax(0, "missing header"));
    };
    match ring {
        Some((line, ls)) => {
            if let Some(other) = first_edge_line {
                return Err(syntax(
                    other.max(line),
                    "`ring:` cannot be combined with edge or label lines",
                ));
            }
            Ok(build_ring(ls, bound)?)
        }
        None => {
            let ls = labels
                .iter()
                .enumerate()
                .map(|(u, l)| l.ok_or_else(|| syntax(0, format!("node {u} has no label"))))
                .collect::<Result<Vec<_>, _>>()?;
            if n == 0 {
                return Err(GraphError::Empty.into());
            }
            Ok(LabeledGraph::from_edges(ls, &edges, bound)?)
        }
    }
}

/// Writes a graph in the format accepted by [`parse_graph`].
pub fn write_graph(g: &LabeledGraph) -> String {
    let mut out = format!("{} {}\n", g.node_count(), g.label_bound());
    if g.is_ring() {
        out.push_str("ring:");
        for l in g.labels() {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
        return out;
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    for v in g.nodes() {
        let _ = writeln!(out, "label {v} {}", g.label(v));
    }
    out
}
