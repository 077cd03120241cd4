//! Plain-text edge lists: a header line `n m`, then `m` lines `i j`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Graph;
use crate::error::{LoreError, Result};

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", graph.node_count(), graph.edge_count())?;
    for &(i, j) in graph.edges() {
        writeln!(out, "{i} {j}")?;
    }
    out.flush()
}

pub fn save_edge_list(graph: &Graph, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| LoreError::io(path, e))?;
    write_edge_list(graph, BufWriter::new(f)).map_err(|e| LoreError::io(path, e))
}

pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let f = File::open(path).map_err(|e| LoreError::io(path, e))?;
    parse_edge_list(BufReader::new(f))
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<usize> {
        let tok = tok.ok_or_else(|| LoreError::Parse {
            line: lineno,
            msg: format!("expected two integers, got {line:?}"),
        })?;
        tok.parse().map_err(|_| LoreError::Parse {
            line: lineno,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(LoreError::Parse {
            line: lineno,
            msg: format!("trailing tokens in {line:?}"),
        });
    }
    Ok((a, b))
}

/// Parses an edge list. Line numbers in errors are 1-based.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| LoreError::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let (a, b) = parse_pair(&line, lineno)?;
        let Some((n, _)) = header else {
            header = Some((a, b));
            continue;
        };
        if a == b {
            return Err(LoreError::Parse {
                line: lineno,
                msg: format!("self-loop on node {a}"),
            });
        }
        if a >= n || b >= n {
            return Err(LoreError::Parse {
                line: lineno,
                msg: format!("node index out of range in ({a}, {b}); n = {n}"),
            });
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = seen.insert(key, lineno) {
            return Err(LoreError::Parse {
                line: lineno,
                msg: format!("duplicate edge ({}, {}), first seen on line {first}", key.0, key.1),
            });
        }
        edges.push(key);
    }
    let (n, m) = header.ok_or(LoreError::Parse {
        line: 1,
        msg: "missing header line \"n m\"".into(),
    })?;
    if edges.len() != m {
        return Err(LoreError::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Graph> {
        parse_edge_list(s.as_bytes())
    }

    #[test]
    fn writes_header_then_sorted_pairs() {
        let g = Graph::from_edges(3, [(2, 1), (0, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "3 2\n0 2\n1 2\n");
    }

    #[test]
    fn round_trip_through_file() {
        let g = super::super::gen_er(60, 0.1, 11).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        save_edge_list(&g, &path).unwrap();
        assert_eq!(load_edge_list(&path).unwrap(), g);
    }

    #[test]
    fn self_loop_is_rejected_with_line() {
        match parse("6 1\n5 5\n") {
            Err(LoreError::Parse { line: 2, msg }) => assert!(msg.contains("self-loop")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_range_is_rejected() {
        match parse("3 1\n0 7\n") {
            Err(LoreError::Parse { line: 2, msg }) => assert!(msg.contains("out of range")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_malformed_lines() {
        assert!(matches!(
            parse("3 2\n0 1\n1 0\n"),
            Err(LoreError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse("3 1\n0 x\n"), Err(LoreError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 1\n0\n"), Err(LoreError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 2\n0 1\n"), Err(LoreError::Parse { line: 1, .. })));
        assert!(matches!(parse(""), Err(LoreError::Parse { .. })));
    }
}
