//! Dataset parsing and the text formats the toolkit reads and writes:
//! LINQS citation files, generic weighted edge lists, sparse feature files
//! and experiment result CSVs.

mod dataset_dir;
mod edgelist;
mod featfile;
mod linqs;
mod results;

pub use dataset_dir::{load_dataset_dir, save_dataset_dir};
pub use edgelist::{parse_edgelist, write_edgelist};
pub use featfile::{read_features, write_features};
pub use linqs::parse_linqs;
pub use results::{read_results, write_results, ResultRecord};

use crate::error::{Error, Result};
use crate::graph::{LabelAssignment, RelationGraph};
use crate::sparse::SparseFeatureMatrix;

/// Link accounting in the convention of citation-network summaries: one
/// link per distinct undirected citation pair, self-citations included.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinkStats {
    pub links: usize,
    pub self_citations: usize,
    pub dangling_dropped: usize,
    pub duplicate_citations: usize,
}

/// A set of relations over one node population plus per-node attributes
/// and labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub graphs: Vec<RelationGraph>,
    pub attributes: SparseFeatureMatrix,
    pub labels: LabelAssignment,
    pub node_ids: Vec<String>,
    pub link_stats: LinkStats,
}

/// Headline statistics of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSummary {
    pub nodes: usize,
    pub links: usize,
    pub classes: usize,
    pub dictionary: usize,
    pub avg_degree: f64,
}

impl Dataset {
    pub fn new(
        name: String,
        graphs: Vec<RelationGraph>,
        attributes: SparseFeatureMatrix,
        labels: LabelAssignment,
        node_ids: Vec<String>,
        link_stats: LinkStats,
    ) -> Result<Self> {
        let n = labels.node_count();
        for (k, g) in graphs.iter().enumerate() {
            if g.node_count() != n {
                return Err(Error::input(format!(
                    "relation {k} has {} nodes, labels have {n}",
                    g.node_count()
                )));
            }
        }
        if attributes.n_rows() != n {
            return Err(Error::input(format!(
                "attributes have {} rows, labels have {n}",
                attributes.n_rows()
            )));
        }
        if node_ids.len() != n {
            return Err(Error::input("node id count mismatch"));
        }
        let mut seen = std::collections::HashSet::with_capacity(n);
        for id in &node_ids {
            if !seen.insert(id.as_str()) {
                return Err(Error::input(format!("duplicate node id {id:?}")));
            }
        }
        Ok(Dataset {
            name,
            graphs,
            attributes,
            labels,
            node_ids,
            link_stats,
        })
    }

    pub fn node_count(&self) -> usize {
        self.labels.node_count()
    }

    pub fn summary(&self) -> DatasetSummary {
        let n = self.node_count();
        DatasetSummary {
            nodes: n,
            links: self.link_stats.links,
            classes: self.labels.class_count(),
            dictionary: self.attributes.n_cols(),
            avg_degree: if n == 0 {
                0.0
            } else {
                2.0 * self.link_stats.links as f64 / n as f64
            },
        }
    }

    /// Drop nodes that are isolated in every relation; re-indexes all
    /// components consistently and returns the old→new map.
    pub fn remove_singletons(&self) -> (Dataset, Vec<Option<usize>>) {
        let n = self.node_count();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| self.graphs.iter().any(|g| g.degree(i) > 0))
            .collect();
        let mut map = vec![None; n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let graphs: Vec<RelationGraph> = self
            .graphs
            .iter()
            .map(|g| {
                let edges: Vec<(usize, usize, f64)> = g
                    .edges()
                    .into_iter()
                    .map(|(i, j, w)| (map[i].unwrap(), map[j].unwrap(), w))
                    .collect();
                RelationGraph::from_edges(keep.len(), &edges).expect("valid reindexed edges")
            })
            .collect();
        let attributes = self.attributes.select_rows(&keep);
        let y: Vec<Option<u32>> = keep
            .iter()
            .map(|&old| self.labels.label(old).map(|m| m as u32))
            .collect();
        let labels = LabelAssignment::new(self.labels.classes().to_vec(), y)
            .expect("class indices unchanged");
        let node_ids = keep.iter().map(|&old| self.node_ids[old].clone()).collect();
        let links = graphs.iter().map(|g| g.edge_count()).sum();
        let ds = Dataset {
            name: self.name.clone(),
            graphs,
            attributes,
            labels,
            node_ids,
            link_stats: LinkStats {
                links,
                ..LinkStats::default()
            },
        };
        (ds, map)
    }
}
