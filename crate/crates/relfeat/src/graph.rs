//! Sparse symmetric graph representation and label bookkeeping.
//!
//! A [`RelationGraph`] stores one weighted, undirected relation over `n`
//! nodes in compressed row-major form: per node, sorted neighbor indices and
//! strictly positive weights. Symmetry is a structural invariant — every
//! stored arc has its mirror with the same weight. Self-loops and duplicate
//! entries never survive construction.

use crate::error::{Error, Result};

/// Weighted symmetric adjacency over a fixed node set.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationGraph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<f64>,
}

/// Counts of inputs that had to be normalized away during construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
}

impl RelationGraph {
    /// Build a symmetric graph from an edge list.
    ///
    /// Duplicate `(i, j)` entries (in either orientation) merge by summing
    /// weights; self-loops are dropped and counted in the returned stats.
    pub fn build(n: usize, edges: &[(usize, usize, f64)]) -> Result<(Self, BuildStats)> {
        let mut stats = BuildStats::default();
        let mut pairs: Vec<(u32, u32, f64)> = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::input(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::input(format!(
                    "edge ({i}, {j}) has non-positive weight {w}"
                )));
            }
            if i == j {
                stats.self_loops_dropped += 1;
                continue;
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            pairs.push((a as u32, b as u32, w));
        }
        pairs.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));

        // Merge duplicates by weight sum.
        let mut merged: Vec<(u32, u32, f64)> = Vec::with_capacity(pairs.len());
        for (a, b, w) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == a && last.1 == b => {
                    last.2 += w;
                    stats.duplicates_merged += 1;
                }
                _ => merged.push((a, b, w)),
            }
        }

        let mut degree = vec![0usize; n];
        for &(a, b, _) in &merged {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let m2 = offsets[n];
        let mut neighbors = vec![0u32; m2];
        let mut weights = vec![0f64; m2];
        let mut cursor = offsets.clone();
        for &(a, b, w) in &merged {
            neighbors[cursor[a as usize]] = b;
            weights[cursor[a as usize]] = w;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            weights[cursor[b as usize]] = w;
            cursor[b as usize] += 1;
        }
        // Rows were filled in (a, b)-sorted order, so the forward arcs of a
        // row are sorted, but mirror arcs interleave; sort each row once.
        let mut graph = RelationGraph {
            n,
            offsets,
            neighbors,
            weights,
        };
        graph.sort_rows();
        Ok((graph, stats))
    }

    /// [`RelationGraph::build`] without the stats.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        Ok(Self::build(n, edges)?.0)
    }

    fn sort_rows(&mut self) {
        for i in 0..self.n {
            let (s, e) = (self.offsets[i], self.offsets[i + 1]);
            let mut row: Vec<(u32, f64)> = self.neighbors[s..e]
                .iter()
                .copied()
                .zip(self.weights[s..e].iter().copied())
                .collect();
            row.sort_by_key(|&(j, _)| j);
            for (k, (j, w)) in row.into_iter().enumerate() {
                self.neighbors[s + k] = j;
                self.weights[s + k] = w;
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Total weight over undirected edges.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() / 2.0
    }

    /// Number of neighbors of `i`.
    pub fn degree(&self, i: usize) -> usize {
        assert!(i < self.n, "node {i} out of range");
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Sum of edge weights incident to `i`.
    pub fn weighted_degree(&self, i: usize) -> f64 {
        let (s, e) = (self.offsets[i], self.offsets[i + 1]);
        self.weights[s..e].iter().sum()
    }

    /// Sorted neighbor indices of `i`.
    pub fn neighbor_ids(&self, i: usize) -> &[u32] {
        assert!(i < self.n, "node {i} out of range");
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Sorted `(neighbor, weight)` pairs of `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (s, e) = (self.offsets[i], self.offsets[i + 1]);
        self.neighbors[s..e]
            .iter()
            .map(|&j| j as usize)
            .zip(self.weights[s..e].iter().copied())
    }

    /// Weight of edge `(i, j)`, or 0 if absent.
    pub fn edge_weight(&self, i: usize, j: usize) -> f64 {
        let ids = self.neighbor_ids(i);
        match ids.binary_search(&(j as u32)) {
            Ok(k) => self.weights[self.offsets[i] + k],
            Err(_) => 0.0,
        }
    }

    /// Canonical `(i, j, w)` list with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for (j, w) in self.neighbors(i) {
                if i < j {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.neighbors.len() as f64 / self.n as f64
    }
}

/// Ordered class list plus an optional class index per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAssignment {
    classes: Vec<String>,
    y: Vec<Option<u32>>,
}

impl LabelAssignment {
    pub fn new(classes: Vec<String>, y: Vec<Option<u32>>) -> Result<Self> {
        let c = classes.len();
        for (i, lab) in y.iter().enumerate() {
            if let Some(m) = lab {
                if *m as usize >= c {
                    return Err(Error::input(format!(
                        "node {i} has class index {m} but only {c} classes exist"
                    )));
                }
            }
        }
        Ok(LabelAssignment { classes, y })
    }

    pub fn node_count(&self) -> usize {
        self.y.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn label(&self, i: usize) -> Option<usize> {
        self.y[i].map(|m| m as usize)
    }

    /// Indices of nodes with a known label.
    pub fn labeled_nodes(&self) -> Vec<usize> {
        (0..self.y.len()).filter(|&i| self.y[i].is_some()).collect()
    }

    /// Per-class member lists (known labels only), each ascending.
    pub fn members_by_class(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes.len()];
        for i in 0..self.y.len() {
            if let Some(m) = self.y[i] {
                out[m as usize].push(i);
            }
        }
        out
    }
}

/// Binary n×c label indicator with at most one 1 per row.
///
/// Row `i` is all-zero iff node `i` is not training-visible; otherwise the
/// single 1 sits in the node's class column. Stored as the per-row class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    n_classes: usize,
    rows: Vec<Option<u32>>,
}

impl LabelMatrix {
    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn class_count(&self) -> usize {
        self.n_classes
    }

    /// Class of the 1-entry in row `i`, if any.
    pub fn row_class(&self, i: usize) -> Option<usize> {
        self.rows[i].map(|m| m as usize)
    }

    /// Total number of ones.
    pub fn ones(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }
}

/// Build the label indicator restricted to `visible` nodes.
///
/// Every visible node must have a known label; all other rows are zero.
pub fn build_label_matrix(labels: &LabelAssignment, visible: &[usize]) -> Result<LabelMatrix> {
    let mut rows = vec![None; labels.node_count()];
    for &i in visible {
        if i >= labels.node_count() {
            return Err(Error::input(format!("visible node {i} out of range")));
        }
        match labels.y[i] {
            Some(m) => rows[i] = Some(m),
            None => {
                return Err(Error::input(format!(
                    "visible node {i} has no known label"
                )))
            }
        }
    }
    Ok(LabelMatrix {
        n_classes: labels.class_count(),
        rows,
    })
}

/// Drop all degree-0 nodes, re-indexing labels consistently.
///
/// Returns the reduced graph and labels plus the old→new index map
/// (`None` for removed nodes).
pub fn remove_singletons(
    graph: &RelationGraph,
    labels: &LabelAssignment,
) -> (RelationGraph, LabelAssignment, Vec<Option<usize>>) {
    assert_eq!(graph.node_count(), labels.node_count());
    let keep: Vec<usize> = (0..graph.node_count())
        .filter(|&i| graph.degree(i) > 0)
        .collect();
    let mut map = vec![None; graph.node_count()];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = Some(new);
    }
    let edges: Vec<(usize, usize, f64)> = graph
        .edges()
        .into_iter()
        .map(|(i, j, w)| (map[i].unwrap(), map[j].unwrap(), w))
        .collect();
    let reduced = RelationGraph::from_edges(keep.len(), &edges)
        .expect("re-indexed edges are in range by construction");
    let y: Vec<Option<u32>> = keep.iter().map(|&old| labels.y[old]).collect();
    let relabeled = LabelAssignment {
        classes: labels.classes.clone(),
        y,
    };
    (reduced, relabeled, map)
}
