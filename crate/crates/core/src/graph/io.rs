//! Edge-list text format.
//!
//! ```text
//! p 4 3        optional header: vertex count, edge count
//! 0 1          one 0-indexed edge per line
//! 1 2
//! 2 3
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Without a header the
//! vertex count is `max id + 1`.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut max_id: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| Error::Parse {
            line: line_no,
            message: message.to_string(),
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "p" {
            if header.is_some() || !edges.is_empty() {
                return Err(err("header must come first and appear once"));
            }
            if fields.len() != 3 {
                return Err(err("expected \"p <n> <m>\""));
            }
            let n = fields[1].parse().map_err(|_| err("bad vertex count"))?;
            let m = fields[2].parse().map_err(|_| err("bad edge count"))?;
            header = Some((n, m));
            continue;
        }
        if fields.len() != 2 {
            return Err(err("expected \"u v\""));
        }
        let u: usize = fields[0].parse().map_err(|_| err("bad vertex id"))?;
        let v: usize = fields[1].parse().map_err(|_| err("bad vertex id"))?;
        if u == v {
            return Err(err(&format!("self-loop at {u}")));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }

    let n = match header {
        Some((n, m)) => {
            if m != edges.len() {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("header declares {m} edges, found {}", edges.len()),
                });
            }
            n
        }
        None => max_id.map_or(0, |m| m + 1),
    };
    Graph::from_edges(n, edges)
}

/// Canonical form: header line, then edges `u < v` sorted lexicographically.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {} {}", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::petersen;
    use proptest::prelude::*;

    #[test]
    fn parses_with_and_without_header() {
        let g = parse_edge_list("p 5 2\n0 1\n# comment\n\n3 2\n").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 2);
        let g = parse_edge_list("0 1\n1 2\n").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(parse_edge_list("").unwrap().order(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_edge_list("1 1\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_edge_list("0 1\n1 0\n"), Err(Error::DuplicateEdge(0, 1)));
        assert!(parse_edge_list("p 3 2\n0 1\n").is_err());
        assert!(parse_edge_list("p 2 1\n0 2\n").is_err());
        assert!(parse_edge_list("0 1 2\n").is_err());
        assert!(parse_edge_list("0 x\n").is_err());
    }

    #[test]
    fn canonical_writer_sorts() {
        let g = parse_edge_list("3 2\n0 3\n1 0\n").unwrap();
        assert_eq!(write_edge_list(&g), "p 4 3\n0 1\n0 3\n2 3\n");
    }

    #[test]
    fn petersen_round_trip() {
        let p = petersen();
        assert_eq!(parse_edge_list(&write_edge_list(&p)).unwrap(), p);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..30, raw in proptest::collection::vec((0usize..30, 0usize..30), 0..80)) {
            let edges = raw.into_iter().filter(|(u, v)| u != v && *u < n && *v < n);
            let g = Graph::from_edges_dedup(n, edges).unwrap();
            let text = write_edge_list(&g);
            prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
            prop_assert_eq!(write_edge_list(&parse_edge_list(&text).unwrap()), text);
        }
    }
}
