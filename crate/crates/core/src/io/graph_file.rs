//! Plain-text graph files.
//!
//! ```text
//! # comment
//! 6
//! 1 2
//! 2 4
//! ```
//!
//! The first non-comment line is the vertex count, every further line one
//! edge between 1-based labels. `#` starts a comment anywhere on a line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

pub fn parse_graph_str(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut g: Option<Graph> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = n else {
            if fields.len() != 1 {
                return Err(Error::parse(line_no, "expected the vertex count"));
            }
            let count: usize = fields[0]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex count '{}'", fields[0])))?;
            if count == 0 || count > MAX_VERTICES {
                return Err(Error::parse(
                    line_no,
                    format!("vertex count {count} outside 1..={MAX_VERTICES}"),
                ));
            }
            n = Some(count);
            g = Some(Graph::empty(count)?);
            continue;
        };
        if fields.len() != 2 {
            return Err(Error::parse(line_no, "expected an edge 'u v'"));
        }
        let mut ends = [0usize; 2];
        for (slot, f) in ends.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex label '{f}'")))?;
            if *slot == 0 || *slot > n {
                return Err(Error::parse(
                    line_no,
                    format!("label {slot} out of range 1..={n}"),
                ));
            }
        }
        let (u, v) = (ends[0] - 1, ends[1] - 1);
        let graph = g.as_mut().expect("set with n");
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop at {}", ends[0])));
        }
        if graph.has_edge(u, v) {
            return Err(Error::parse(
                line_no,
                format!("duplicate edge {} {}", ends[0], ends[1]),
            ));
        }
        graph.toggle_edge(u, v);
    }
    g.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing vertex count"))
}

pub fn parse_graph(path: &Path) -> Result<Graph> {
    parse_graph_str(&std::fs::read_to_string(path)?)
}

/// Vertex count, then edges in ascending label order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.labeled_edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::network_graph;
    use proptest::prelude::*;

    #[test]
    fn network_graph_file() {
        let g = parse_graph_str("6\n1 2\n2 4\n3 4\n4 6\n5 6\n").unwrap();
        assert_eq!(g, network_graph());
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn single_vertex() {
        let g = parse_graph_str("1").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph_str("# ring\n\n3 # three\n1 2\n2 3 # last\n").unwrap();
        assert_eq!(g.labeled_edges(), vec![(1, 2), (2, 3)]);
    }

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(parse_graph_str("3\n1 2\n2 1\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_graph_str("3\n1 4\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_graph_str("3\n1 2 3\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_graph_str("# only\nx\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_graph_str("3\n0 1\n").unwrap_err()), 2);
        assert!(parse_graph_str("").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..10, seed in any::<u64>()) {
            let mut g = Graph::empty(n).unwrap();
            let mut s = seed;
            for u in 0..n {
                for v in u + 1..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if s >> 63 == 1 {
                        g.toggle_edge(u, v);
                    }
                }
            }
            prop_assert_eq!(parse_graph_str(&write_graph(&g)).unwrap(), g);
        }
    }
}
