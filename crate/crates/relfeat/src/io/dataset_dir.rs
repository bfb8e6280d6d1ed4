//! On-disk layout for an ingested dataset: a directory holding
//!
//! ```text
//! classes.txt       one class name per line, index order
//! nodes.tsv         <external-id>\t<class-name-or-?>
//! graph.edges       canonical weighted edge list (one file per relation,
//!                   graph.edges, graph2.edges, ...)
//! attributes.feat   sparse attribute matrix in feature-file format
//! stats.tsv         link accounting from the original parse
//! ```

use super::{edgelist, featfile, Dataset, LinkStats};
use crate::error::{Error, Result};
use crate::graph::LabelAssignment;
use std::io::Write;
use std::path::Path;

fn graph_file_name(k: usize) -> String {
    if k == 0 {
        "graph.edges".to_string()
    } else {
        format!("graph{}.edges", k + 1)
    }
}

pub fn save_dataset_dir(ds: &Dataset, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut classes = String::new();
    for c in ds.labels.classes() {
        classes.push_str(c);
        classes.push('\n');
    }
    std::fs::write(dir.join("classes.txt"), classes)?;

    let mut nodes = String::new();
    for i in 0..ds.node_count() {
        nodes.push_str(&ds.node_ids[i]);
        nodes.push('\t');
        match ds.labels.label(i) {
            Some(m) => nodes.push_str(&ds.labels.classes()[m]),
            None => nodes.push('?'),
        }
        nodes.push('\n');
    }
    std::fs::write(dir.join("nodes.tsv"), nodes)?;

    for (k, g) in ds.graphs.iter().enumerate() {
        edgelist::write_edgelist(g, &dir.join(graph_file_name(k)))?;
    }

    let y: Vec<Option<usize>> = (0..ds.node_count()).map(|i| ds.labels.label(i)).collect();
    featfile::write_features(&ds.attributes, &y, &dir.join("attributes.feat"))?;

    let mut stats = std::fs::File::create(dir.join("stats.tsv"))?;
    writeln!(stats, "links\t{}", ds.link_stats.links)?;
    writeln!(stats, "self_citations\t{}", ds.link_stats.self_citations)?;
    writeln!(stats, "dangling_dropped\t{}", ds.link_stats.dangling_dropped)?;
    writeln!(
        stats,
        "duplicate_citations\t{}",
        ds.link_stats.duplicate_citations
    )?;
    Ok(())
}

pub fn load_dataset_dir(dir: &Path) -> Result<Dataset> {
    let classes_path = dir.join("classes.txt");
    let classes_text = std::fs::read_to_string(&classes_path)?;
    let classes: Vec<String> = classes_text
        .lines()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    let class_index: std::collections::HashMap<&str, u32> = classes
        .iter()
        .enumerate()
        .map(|(m, c)| (c.as_str(), m as u32))
        .collect();

    let nodes_path = dir.join("nodes.tsv");
    let nodes_text = std::fs::read_to_string(&nodes_path)?;
    let mut node_ids = Vec::new();
    let mut y: Vec<Option<u32>> = Vec::new();
    for (k, line) in nodes_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, class) = line.split_once('\t').ok_or_else(|| {
            Error::parse(&nodes_path, k + 1, "expected <id>\\t<class>")
        })?;
        node_ids.push(id.to_string());
        if class == "?" {
            y.push(None);
        } else {
            let m = class_index.get(class).ok_or_else(|| {
                Error::parse(&nodes_path, k + 1, format!("unknown class {class:?}"))
            })?;
            y.push(Some(*m));
        }
    }
    let n = node_ids.len();

    let mut graphs = Vec::new();
    for k in 0.. {
        let path = dir.join(graph_file_name(k));
        if !path.exists() {
            break;
        }
        graphs.push(edgelist::parse_edgelist(&path, Some(n))?);
    }
    if graphs.is_empty() {
        return Err(Error::input(format!(
            "no graph.edges found in {}",
            dir.display()
        )));
    }

    let (attributes, _) = featfile::read_features(&dir.join("attributes.feat"))?;

    let mut link_stats = LinkStats {
        links: graphs.iter().map(|g| g.edge_count()).sum(),
        ..LinkStats::default()
    };
    if let Ok(stats_text) = std::fs::read_to_string(dir.join("stats.tsv")) {
        for line in stats_text.lines() {
            if let Some((key, value)) = line.split_once('\t') {
                if let Ok(v) = value.trim().parse::<usize>() {
                    match key {
                        "links" => link_stats.links = v,
                        "self_citations" => link_stats.self_citations = v,
                        "dangling_dropped" => link_stats.dangling_dropped = v,
                        "duplicate_citations" => link_stats.duplicate_citations = v,
                        _ => {}
                    }
                }
            }
        }
    }

    let labels = LabelAssignment::new(classes, y)?;
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    Dataset::new(name, graphs, attributes, labels, node_ids, link_stats)
}
