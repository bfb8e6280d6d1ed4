//! Experiment result records and their append-safe CSV form.
//!
//! The CSV carries only the deterministic fields (dataset, recipe, ratio,
//! seed, accuracy) so that identical configurations reproduce identical
//! bytes; wall-clock timings stay in memory.

use crate::error::{Error, Result};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub const CSV_HEADER: &str = "dataset,recipe,ratio,seed,accuracy";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub dataset: String,
    pub recipe: String,
    pub ratio: f64,
    pub seed: u64,
    pub accuracy: f64,
    /// Wall-clock seconds for the cell; not serialized.
    pub wall_secs: f64,
}

fn quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(ch) = chars.next() {
        match ch {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    cur.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' => quoted = true,
            ',' if !quoted => {
                fields.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    fields.push(cur);
    fields
}

/// Append records to a CSV file, emitting the header only when the file is
/// new or empty.
pub fn write_results(records: &[ResultRecord], path: &Path) -> Result<()> {
    let needs_header = match std::fs::metadata(path) {
        Ok(meta) => meta.len() == 0,
        Err(_) => true,
    };
    let file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    let mut out = std::io::BufWriter::new(file);
    if needs_header {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            quote(&r.dataset),
            quote(&r.recipe),
            r.ratio,
            r.seed,
            r.accuracy
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRecord>> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        if line.trim().is_empty() {
            continue;
        }
        if lineno == 1 {
            if line.trim() != CSV_HEADER {
                return Err(Error::parse(path, 1, "unrecognized results header"));
            }
            continue;
        }
        let fields = split_csv(&line);
        if fields.len() != 5 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let ratio: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad ratio"))?;
        let seed: u64 = fields[3]
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad seed"))?;
        let accuracy: f64 = fields[4]
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad accuracy"))?;
        out.push(ResultRecord {
            dataset: fields[0].clone(),
            recipe: fields[1].clone(),
            ratio,
            seed,
            accuracy,
            wall_secs: 0.0,
        });
    }
    Ok(out)
}
