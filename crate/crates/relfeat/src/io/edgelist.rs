//! Generic weighted edge-list files: one `i<TAB>j<TAB>weight` line per
//! edge, weight optional (default 1). Whitespace-separated fields are
//! accepted. The loader symmetrizes and merges duplicates by weight sum.

use crate::error::{Error, Result};
use crate::graph::RelationGraph;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub fn parse_edgelist(path: &Path, n_hint: Option<usize>) -> Result<RelationGraph> {
    let file = std::fs::File::open(path)?;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_id = 0usize;
    let mut any = false;
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let lineno = k + 1;
        let mut it = t.split_whitespace();
        let i: usize = it
            .next()
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad source index"))?;
        let j: usize = it
            .next()
            .ok_or_else(|| Error::parse(path, lineno, "missing target index"))?
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad target index"))?;
        let w: f64 = match it.next() {
            Some(tok) => tok
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad edge weight"))?,
            None => 1.0,
        };
        if it.next().is_some() {
            return Err(Error::parse(path, lineno, "too many fields"));
        }
        max_id = max_id.max(i).max(j);
        any = true;
        edges.push((i, j, w));
    }
    let n = match n_hint {
        Some(h) => {
            if any && max_id >= h {
                return Err(Error::input(format!(
                    "edge references node {max_id} but n_hint is {h}"
                )));
            }
            h
        }
        None => {
            if any {
                max_id + 1
            } else {
                0
            }
        }
    };
    RelationGraph::from_edges(n, &edges)
}

/// Canonical edge-list dump: `i<TAB>j<TAB>w`, i < j, ascending.
pub fn write_edgelist(graph: &RelationGraph, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    for (i, j, w) in graph.edges() {
        writeln!(out, "{i}\t{j}\t{w}")?;
    }
    out.flush()?;
    Ok(())
}
