//! Line-oriented text formats for graphs and queries.
//!
//! ```text
//! # comment
//! sigma a b c
//! v 0 a,b
//! v 1 c
//! e 0 1
//! ```
//!
//! Vertex ids are 0-based and must cover `0..n` exactly once. A label is a
//! comma-joined token list. A query file is one line of whitespace-separated
//! tokens.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::{Alphabet, LabeledGraph, ModelError, QueryString};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("document must start with a `sigma` line")]
    MissingSigma,
    #[error("line {line}: unknown symbol `{token}`")]
    UnknownSymbol { line: usize, token: String },
    #[error("line {line}: edge {src} -> {dst} refers to an undeclared vertex")]
    DanglingEdge { line: usize, src: usize, dst: usize },
    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge { line: usize, src: usize, dst: usize },
    #[error("line {line}: vertex {id} declared twice")]
    DuplicateVertex { line: usize, id: usize },
    #[error("line {line}: vertex {id} has an empty label")]
    EmptyLabel { line: usize, id: usize },
    #[error("vertex ids must be 0..{count}; {missing} is missing")]
    MissingVertex { count: usize, missing: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("query is empty")]
    EmptyQuery,
    #[error("query must be a single line, found {0} lines")]
    MultiLineQuery(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_index(line: usize, field: &str, what: &str) -> Result<usize, ParseError> {
    field.parse().map_err(|_| ParseError::Malformed {
        line,
        message: format!("expected {what}, found `{field}`"),
    })
}

pub fn parse_graph(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut lines = content_lines(text);
    let (sigma_line, header) = lines.next().ok_or(ParseError::MissingSigma)?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("sigma") {
        return Err(ParseError::MissingSigma);
    }
    let alphabet = Alphabet::new(fields).map_err(|e| match e {
        ModelError::EmptyAlphabet => ParseError::Malformed {
            line: sigma_line,
            message: "alphabet is empty".into(),
        },
        other => other.into(),
    })?;

    let mut vertices: Vec<Option<Vec<_>>> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            ["v", id, rest @ ..] => {
                let id = parse_index(line, id, "vertex id")?;
                let label = match rest {
                    [] => return Err(ParseError::EmptyLabel { line, id }),
                    [label] => *label,
                    _ => {
                        return Err(ParseError::Malformed {
                            line,
                            message: "label tokens must be comma-joined without spaces".into(),
                        })
                    }
                };
                let symbols = label
                    .split(',')
                    .map(|tok| {
                        if tok.is_empty() {
                            return Err(ParseError::Malformed {
                                line,
                                message: "empty token inside label".into(),
                            });
                        }
                        alphabet.symbol(tok).ok_or_else(|| ParseError::UnknownSymbol {
                            line,
                            token: tok.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if vertices.len() <= id {
                    vertices.resize(id + 1, None);
                }
                if vertices[id].is_some() {
                    return Err(ParseError::DuplicateVertex { line, id });
                }
                vertices[id] = Some(symbols);
            }
            ["e", src, dst] => {
                let src = parse_index(line, src, "edge source")?;
                let dst = parse_index(line, dst, "edge target")?;
                edges.push((line, src, dst));
            }
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("unrecognised line `{content}`"),
                })
            }
        }
    }

    let count = vertices.len();
    let labels = vertices
        .into_iter()
        .enumerate()
        .map(|(id, l)| l.ok_or(ParseError::MissingVertex { count, missing: id }))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = HashSet::new();
    for &(line, src, dst) in &edges {
        if src >= count || dst >= count {
            return Err(ParseError::DanglingEdge { line, src, dst });
        }
        if !seen.insert((src, dst)) {
            return Err(ParseError::DuplicateEdge { line, src, dst });
        }
    }
    let edges = edges.into_iter().map(|(_, s, d)| (s, d)).collect();
    Ok(LabeledGraph::new(alphabet, labels, edges)?)
}

pub fn serialize_graph(graph: &LabeledGraph) -> String {
    let alpha = graph.alphabet();
    let mut out = String::new();
    out.push_str("sigma");
    for tok in alpha.tokens() {
        out.push(' ');
        out.push_str(tok);
    }
    out.push('\n');
    for (v, label) in graph.labels().iter().enumerate() {
        let joined: Vec<&str> = label.iter().map(|&s| alpha.token(s)).collect();
        let _ = writeln!(out, "v {v} {}", joined.join(","));
    }
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

pub fn parse_query(text: &str, alphabet: &Alphabet) -> Result<QueryString, ParseError> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let (line, content) = match lines.as_slice() {
        [] => return Err(ParseError::EmptyQuery),
        [one] => *one,
        many => return Err(ParseError::MultiLineQuery(many.len())),
    };
    let symbols = content
        .split_whitespace()
        .map(|tok| {
            alphabet.symbol(tok).ok_or_else(|| ParseError::UnknownSymbol {
                line,
                token: tok.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    QueryString::new(symbols).map_err(|_| ParseError::EmptyQuery)
}

pub fn serialize_query(query: &QueryString, alphabet: &Alphabet) -> String {
    let mut out = alphabet.render(query.symbols());
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let text = "sigma a b\nv 0 a\nv 1 b\ne 0 1\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.alphabet().render(g.label(1)), "b");
        assert_eq!(serialize_graph(&g), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\nsigma a b\n\nv 0 a,b # multi\nv 1 b\ne 1 0\ne 0 0\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(serialize_graph(&g), "sigma a b\nv 0 a,b\nv 1 b\ne 1 0\ne 0 0\n");
    }

    #[test]
    fn dangling_edge() {
        let err = parse_graph("sigma a b\nv 0 a\nv 1 b\ne 0 5\n").unwrap_err();
        assert_eq!(err, ParseError::DanglingEdge { line: 4, src: 0, dst: 5 });
    }

    #[test]
    fn error_cases() {
        assert!(matches!(
            parse_graph("sigma a\nv 0 q\n"),
            Err(ParseError::UnknownSymbol { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("sigma a\nv 0 a\nv 0 a\n"),
            Err(ParseError::DuplicateVertex { id: 0, .. })
        ));
        assert!(matches!(parse_graph("sigma a\nv 0\n"), Err(ParseError::EmptyLabel { id: 0, .. })));
        assert!(matches!(
            parse_graph("sigma a\nv 1 a\n"),
            Err(ParseError::MissingVertex { missing: 0, .. })
        ));
        assert!(matches!(parse_graph("v 0 a\n"), Err(ParseError::MissingSigma)));
        assert!(matches!(
            parse_graph("sigma a\nv 0 a\ne 0 0\ne 0 0\n"),
            Err(ParseError::DuplicateEdge { .. })
        ));
    }

    #[test]
    fn query_parsing() {
        let a = Alphabet::new(["x0", "z"]).unwrap();
        let q = parse_query("# q\nx0 z x0\n", &a).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(serialize_query(&q, &a), "x0 z x0\n");
        assert_eq!(parse_query("\n# nothing\n", &a), Err(ParseError::EmptyQuery));
        assert!(matches!(parse_query("x0\nz\n", &a), Err(ParseError::MultiLineQuery(2))));
        assert!(matches!(parse_query("y\n", &a), Err(ParseError::UnknownSymbol { .. })));
    }
}
