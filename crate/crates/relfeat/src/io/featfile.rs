//! Sparse feature file format.
//!
//! ```text
//! #cols=<int> #blocks=<name:start:end,...>
//! <label-or-?> <col>:<value> ...
//! ```
//!
//! One row per line, columns strictly ascending. Values print in Rust's
//! shortest exact decimal form, so write∘read is the identity.

use crate::error::{Error, Result};
use crate::sparse::{FeatureBlock, SparseFeatureMatrix};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub fn write_features(
    x: &SparseFeatureMatrix,
    y: &[Option<usize>],
    path: &Path,
) -> Result<()> {
    if y.len() != x.n_rows() {
        return Err(Error::input(format!(
            "labels ({}) and rows ({}) disagree",
            y.len(),
            x.n_rows()
        )));
    }
    for b in x.blocks() {
        if b.name.contains([':', ',']) || b.name.contains(char::is_whitespace) {
            return Err(Error::input(format!(
                "block name {:?} may not contain ':', ',' or whitespace",
                b.name
            )));
        }
    }
    let file = std::fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    let blocks = x
        .blocks()
        .iter()
        .map(|b| format!("{}:{}:{}", b.name, b.start, b.end))
        .collect::<Vec<_>>()
        .join(",");
    writeln!(out, "#cols={} #blocks={}", x.n_cols(), blocks)?;
    for i in 0..x.n_rows() {
        match y[i] {
            Some(m) => write!(out, "{m}")?,
            None => write!(out, "?")?,
        }
        for &(col, v) in x.row(i) {
            write!(out, " {col}:{v}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_features(path: &Path) -> Result<(SparseFeatureMatrix, Vec<Option<usize>>)> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header"))??;
    let mut n_cols: Option<usize> = None;
    let mut blocks: Vec<FeatureBlock> = Vec::new();
    for token in header.split_whitespace() {
        if let Some(rest) = token.strip_prefix("#cols=") {
            n_cols = Some(
                rest.parse()
                    .map_err(|_| Error::parse(path, 1, "bad #cols"))?,
            );
        } else if let Some(rest) = token.strip_prefix("#blocks=") {
            if rest.is_empty() {
                continue;
            }
            for spec in rest.split(',') {
                let mut parts = spec.split(':');
                let (name, start, end) = match (parts.next(), parts.next(), parts.next()) {
                    (Some(n), Some(s), Some(e)) => (n, s, e),
                    _ => return Err(Error::parse(path, 1, format!("bad block spec {spec:?}"))),
                };
                let start: usize = start
                    .parse()
                    .map_err(|_| Error::parse(path, 1, "bad block start"))?;
                let end: usize = end
                    .parse()
                    .map_err(|_| Error::parse(path, 1, "bad block end"))?;
                blocks.push(FeatureBlock::new(name, start, end));
            }
        }
    }
    let n_cols = n_cols.ok_or_else(|| Error::parse(path, 1, "missing #cols"))?;

    let mut rows: Vec<Vec<(u32, f64)>> = Vec::new();
    let mut y: Vec<Option<usize>> = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let lineno = k + 2;
        let t = line.trim_end();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split_whitespace();
        let label_tok = parts.next().unwrap();
        let label = if label_tok == "?" {
            None
        } else {
            Some(
                label_tok
                    .parse::<usize>()
                    .map_err(|_| Error::parse(path, lineno, format!("bad label {label_tok:?}")))?,
            )
        };
        let mut row: Vec<(u32, f64)> = Vec::new();
        let mut prev: Option<u32> = None;
        for token in parts {
            let (col, val) = token
                .split_once(':')
                .ok_or_else(|| Error::parse(path, lineno, format!("bad entry {token:?}")))?;
            let col: u32 = col
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad column index"))?;
            if col as usize >= n_cols {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("column {col} out of declared range {n_cols}"),
                ));
            }
            if let Some(p) = prev {
                if col <= p {
                    return Err(Error::parse(
                        path,
                        lineno,
                        format!("columns not ascending at {col}"),
                    ));
                }
            }
            let val: f64 = val
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad value"))?;
            prev = Some(col);
            row.push((col, val));
        }
        rows.push(row);
        y.push(label);
    }
    let x = SparseFeatureMatrix::from_rows(n_cols, rows, blocks)?;
    Ok((x, y))
}
