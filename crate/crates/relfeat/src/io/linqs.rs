//! Parser for LINQS-style citation datasets (Cora, CiteSeer).
//!
//! The content file has one node per line: a string id, `d` binary word
//! flags and a class name, tab-separated. The cites file has one citation
//! per line: two string ids. Citation direction is discarded, duplicate
//! citations collapse to a single unit-weight link, references to unknown
//! ids are dropped (and counted), and self-citations are counted as links
//! but never become graph edges.

use super::{Dataset, LinkStats};
use crate::error::{Error, Result};
use crate::graph::{LabelAssignment, RelationGraph};
use crate::sparse::{FeatureBlock, SparseFeatureMatrix};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, BufReader};
use std::path::Path;

pub fn parse_linqs(content_path: &Path, cites_path: &Path) -> Result<Dataset> {
    let content = std::fs::File::open(content_path)?;
    let mut node_ids: Vec<String> = Vec::new();
    let mut id_index: HashMap<String, u32> = HashMap::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut bow_rows: Vec<Vec<(u32, f64)>> = Vec::new();
    let mut dictionary: Option<usize> = None;

    for (k, line) in BufReader::new(content).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = k + 1;
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() < 3 {
            return Err(Error::parse(
                content_path,
                lineno,
                format!("expected id, word flags and class, found {} fields", parts.len()),
            ));
        }
        let id = parts[0].to_string();
        let class = parts[parts.len() - 1].trim().to_string();
        if class.is_empty() {
            return Err(Error::parse(content_path, lineno, "empty class label"));
        }
        let flags = &parts[1..parts.len() - 1];
        match dictionary {
            None => dictionary = Some(flags.len()),
            Some(d) if d != flags.len() => {
                return Err(Error::parse(
                    content_path,
                    lineno,
                    format!("expected {d} word flags, found {}", flags.len()),
                ));
            }
            _ => {}
        }
        let mut row = Vec::new();
        for (w, flag) in flags.iter().enumerate() {
            match flag.trim() {
                "0" => {}
                "1" => row.push((w as u32, 1.0)),
                other => {
                    return Err(Error::parse(
                        content_path,
                        lineno,
                        format!("word flag must be 0 or 1, found {other:?}"),
                    ));
                }
            }
        }
        if id_index.contains_key(&id) {
            return Err(Error::parse(
                content_path,
                lineno,
                format!("duplicate node id {id:?}"),
            ));
        }
        id_index.insert(id.clone(), node_ids.len() as u32);
        node_ids.push(id);
        raw_labels.push(class);
        bow_rows.push(row);
    }
    let n = node_ids.len();
    let dictionary = dictionary.unwrap_or(0);

    // class names sorted for a stable index order
    let class_set: BTreeSet<&String> = raw_labels.iter().collect();
    let classes: Vec<String> = class_set.into_iter().cloned().collect();
    let class_of: BTreeMap<&str, u32> = classes
        .iter()
        .enumerate()
        .map(|(m, c)| (c.as_str(), m as u32))
        .collect();
    let y: Vec<Option<u32>> = raw_labels
        .iter()
        .map(|c| Some(class_of[c.as_str()]))
        .collect();

    let cites = std::fs::File::open(cites_path)?;
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut stats = LinkStats::default();
    let mut resolved_lines = 0usize;
    for (k, line) in BufReader::new(cites).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = k + 1;
        let mut it = line.split_whitespace();
        let (a, b) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::parse(
                    cites_path,
                    lineno,
                    "expected two node ids per citation",
                ));
            }
        };
        let (ia, ib) = match (id_index.get(a), id_index.get(b)) {
            (Some(&ia), Some(&ib)) => (ia, ib),
            _ => {
                stats.dangling_dropped += 1;
                continue;
            }
        };
        resolved_lines += 1;
        let key = (ia.min(ib), ia.max(ib));
        pairs.insert(key);
    }
    stats.self_citations = pairs.iter().filter(|(a, b)| a == b).count();
    stats.links = pairs.len();
    stats.duplicate_citations = resolved_lines - pairs.len();

    let edges: Vec<(usize, usize, f64)> = pairs
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a as usize, b as usize, 1.0))
        .collect();
    let graph = RelationGraph::from_edges(n, &edges)?;
    let attributes = SparseFeatureMatrix::from_rows(
        dictionary,
        bow_rows,
        vec![FeatureBlock::new("bow", 0, dictionary)],
    )?;
    let labels = LabelAssignment::new(classes, y)?;
    let name = content_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Dataset::new(name, vec![graph], attributes, labels, node_ids, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(text.as_bytes()).unwrap();
        path
    }

    fn tmpdir(tag: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("relfeat_linqs_{tag}"));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn toy_two_node_dataset() {
        let dir = tmpdir("toy");
        let content = write_tmp(&dir, "toy.content", "p1\t1\t0\tA\np2\t0\t1\tB\n");
        let cites = write_tmp(&dir, "toy.cites", "p1\tp2\n");
        let ds = parse_linqs(&content, &cites).unwrap();
        assert_eq!(ds.node_count(), 2);
        assert_eq!(ds.graphs[0].edge_count(), 1);
        assert_eq!(ds.labels.classes(), &["A".to_string(), "B".to_string()]);
        assert_eq!(ds.attributes.n_cols(), 2);
        assert_eq!(ds.summary().links, 1);
    }

    #[test]
    fn dangling_and_duplicate_citations_counted() {
        let dir = tmpdir("dangling");
        let content = write_tmp(&dir, "d.content", "a\t1\tX\nb\t0\tX\nc\t1\tY\n");
        let cites = write_tmp(&dir, "d.cites", "a\tb\nb\ta\na\tmissing\nc\tc\na\tc\n");
        let ds = parse_linqs(&content, &cites).unwrap();
        // a-b counted once, c-c is a self link, a-c is a link
        assert_eq!(ds.link_stats.links, 3);
        assert_eq!(ds.link_stats.self_citations, 1);
        assert_eq!(ds.link_stats.dangling_dropped, 1);
        assert_eq!(ds.link_stats.duplicate_citations, 1);
        // the graph itself carries only the two proper edges
        assert_eq!(ds.graphs[0].edge_count(), 2);
    }

    #[test]
    fn malformed_lines_report_position() {
        let dir = tmpdir("bad");
        let content = write_tmp(&dir, "bad.content", "a\t1\tX\nb\t1\t0\tX\n");
        let cites = write_tmp(&dir, "bad.cites", "");
        // inconsistent flag count on line 2
        let err = parse_linqs(&content, &cites).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(":2:"), "got {msg}");

        let content2 = write_tmp(&dir, "bad2.content", "a\t2\tX\n");
        let err2 = parse_linqs(&content2, &cites).unwrap_err();
        assert!(err2.to_string().contains("word flag"), "got {err2}");
    }
}
