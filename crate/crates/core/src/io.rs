//! Plain-text instance formats.
//!
//! `.hg` (hypergraphs): first line `n m`, then `m` lines each holding the
//! ascending 0-based vertex indices of one edge.
//!
//! `.gr` (graphs): first line `n m`, then `m` lines `u v`.
//!
//! In both formats a line starting with `#` is a comment and blank lines are
//! ignored.

use std::fs;
use std::path::Path;

use crate::domination::Graph;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, found `{tok}`"),
            })
        })
        .collect()
}

fn parse_header(lines: &mut dyn Iterator<Item = (usize, &str)>) -> Result<(usize, usize)> {
    let (line, text) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "missing header line `n m`".into(),
    })?;
    match parse_numbers(line, text)?.as_slice() {
        [n, m] => Ok((*n, *m)),
        _ => Err(Error::Parse {
            line,
            msg: "header must be `n m`".into(),
        }),
    }
}

pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        let edge = parse_numbers(line, body)?;
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                line,
                msg: "edge vertices must be strictly ascending".into(),
            });
        }
        if let Some(&v) = edge.iter().find(|&&v| v >= n) {
            return Err(Error::Parse {
                line,
                msg: format!("vertex {v} out of range (n = {n})"),
            });
        }
        edges.push(edge);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::new(n, edges)
}

/// Serialises to `.hg`. With `canonical`, edges are sorted lexicographically;
/// otherwise insertion order is kept.
pub fn write_hg(h: &Hypergraph, canonical: bool) -> String {
    let edges = if canonical {
        h.sorted_edges()
    } else {
        h.edges().to_vec()
    };
    let mut out = format!("{} {}\n", h.n(), h.m());
    for e in edges {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_gr(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut pairs = Vec::with_capacity(m);
    for (line, body) in lines {
        match parse_numbers(line, body)?.as_slice() {
            [u, v] => pairs.push((*u, *v)),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "edge line must be `u v`".into(),
                })
            }
        }
    }
    if pairs.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", pairs.len()),
        });
    }
    Graph::new(n, pairs)
}

pub fn write_gr(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edge_list() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_hg(path: &Path) -> std::io::Result<Result<Hypergraph>> {
    Ok(parse_hg(&fs::read_to_string(path)?))
}

pub fn read_gr(path: &Path) -> std::io::Result<Result<Graph>> {
    Ok(parse_gr(&fs::read_to_string(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# H6\n6 3\n\n0 1 2 3\n# middle\n0 1 4 5\n2 3 4 5\n";
        let h = parse_hg(text).unwrap();
        assert_eq!((h.n(), h.m()), (6, 3));
        assert_eq!(h.edges()[1], vec![0, 1, 4, 5]);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_hg(""), Err(Error::Parse { line: 0, .. })));
        assert!(matches!(parse_hg("3 1\n2 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_hg("3 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hg("3 1\n0 5\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_hg("3 1\n0 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_gr("3 1\n0 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_writer_sorts_edges() {
        let h = Hypergraph::new(4, [vec![2, 3], vec![0, 1]]).unwrap();
        assert_eq!(write_hg(&h, false), "4 2\n2 3\n0 1\n");
        assert_eq!(write_hg(&h, true), "4 2\n0 1\n2 3\n");
    }

    #[test]
    fn graph_round_trip() {
        let g = parse_gr("4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(parse_gr(&write_gr(&g)).unwrap(), g);
    }
}
