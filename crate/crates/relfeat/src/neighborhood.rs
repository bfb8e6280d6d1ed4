//! Exact hop-distance neighborhood shells and the feature families built on
//! them: neighbor-ID indicators, neighbor class counts (NCC) and neighbor
//! class probabilities (NCP).
//!
//! Distance is the number of edges on a shortest path; edge weights are
//! ignored here. Shells are computed by per-source BFS truncated at `d_max`.

use crate::error::{Error, Result};
use crate::graph::{LabelMatrix, RelationGraph};
use crate::sparse::{FeatureBlock, SparseFeatureMatrix};

/// For every node, the sorted sets of nodes at exact hop distance
/// `1..=d_max`. Shell 0 (the node itself) is never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodShells {
    d_max: usize,
    // shells[i][d-1] = sorted nodes at distance exactly d from i
    shells: Vec<Vec<Vec<u32>>>,
}

impl NeighborhoodShells {
    pub fn node_count(&self) -> usize {
        self.shells.len()
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Sorted nodes at distance exactly `d` from `i` (1 ≤ d ≤ d_max).
    pub fn shell(&self, i: usize, d: usize) -> &[u32] {
        assert!(d >= 1 && d <= self.d_max, "distance {d} out of range");
        &self.shells[i][d - 1]
    }
}

/// BFS from every source, truncated at depth `d_max`.
pub fn compute_shells(graph: &RelationGraph, d_max: usize) -> Result<NeighborhoodShells> {
    if d_max < 1 {
        return Err(Error::input("d_max must be at least 1"));
    }
    let n = graph.node_count();
    let mut shells = vec![vec![Vec::new(); d_max]; n];
    // dist buffer reused across sources; u32::MAX = unvisited
    let mut dist = vec![u32::MAX; n];
    let mut frontier: Vec<u32> = Vec::new();
    let mut next: Vec<u32> = Vec::new();
    for src in 0..n {
        dist[src] = 0;
        frontier.clear();
        frontier.push(src as u32);
        let mut touched: Vec<u32> = vec![src as u32];
        for d in 1..=d_max {
            next.clear();
            for &u in &frontier {
                for (v, _) in graph.neighbors(u as usize) {
                    if dist[v] == u32::MAX {
                        dist[v] = d as u32;
                        next.push(v as u32);
                        touched.push(v as u32);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let mut shell = next.clone();
            shell.sort_unstable();
            shells[src][d - 1] = shell;
            std::mem::swap(&mut frontier, &mut next);
        }
        for &u in &touched {
            dist[u as usize] = u32::MAX;
        }
    }
    Ok(NeighborhoodShells { d_max, shells })
}

fn check_distances(distances: &[usize], d_max: usize) -> Result<Vec<usize>> {
    if distances.is_empty() {
        return Err(Error::input("distance set must be non-empty"));
    }
    let mut ds: Vec<usize> = distances.to_vec();
    ds.sort_unstable();
    ds.dedup();
    for &d in &ds {
        if d < 1 || d > d_max {
            return Err(Error::input(format!(
                "distance {d} outside computed range 1..={d_max}"
            )));
        }
    }
    Ok(ds)
}

/// Binary indicators of which nodes sit at which distance: one n-wide block
/// per requested distance, column `j` of block `d` set iff `j` is in
/// `shell_d(i)`. Unlabeled nodes appear as columns like any other node.
pub fn neighbor_id_features(
    shells: &NeighborhoodShells,
    distances: &[usize],
) -> Result<SparseFeatureMatrix> {
    let ds = check_distances(distances, shells.d_max())?;
    let n = shells.node_count();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut blocks = Vec::with_capacity(ds.len());
    for (k, &d) in ds.iter().enumerate() {
        let offset = (k * n) as u32;
        for i in 0..n {
            for &j in shells.shell(i, d) {
                rows[i].push((offset + j, 1.0));
            }
        }
        blocks.push(FeatureBlock::new(format!("ids_d{d}"), k * n, (k + 1) * n));
    }
    SparseFeatureMatrix::from_rows(n * ds.len(), rows, blocks)
}

/// Zero out the columns of a neighbor-ID matrix that belong to nodes not in
/// `keep`. Column blocks are n columns wide, so column `c` refers to node
/// `c mod n`.
pub fn restrict_neighbor_ids(
    ids: &SparseFeatureMatrix,
    n: usize,
    keep: &[bool],
) -> Result<SparseFeatureMatrix> {
    if keep.len() != n || ids.n_cols() % n != 0 {
        return Err(Error::input(
            "keep mask length must equal the node count of the id blocks",
        ));
    }
    let rows = (0..ids.n_rows())
        .map(|i| {
            ids.row(i)
                .iter()
                .copied()
                .filter(|&(c, _)| keep[c as usize % n])
                .collect()
        })
        .collect();
    SparseFeatureMatrix::from_rows(ids.n_cols(), rows, ids.blocks().to_vec())
}

/// Neighbor class counts: one c-wide block per distance, entry `(i, m)` of
/// block `d` counting the class-`m` nodes in `shell_d(i)`. Equals the
/// product of the distance-d indicator matrix with the label matrix.
pub fn ncc_features(
    shells: &NeighborhoodShells,
    label_matrix: &LabelMatrix,
    distances: &[usize],
) -> Result<SparseFeatureMatrix> {
    let ds = check_distances(distances, shells.d_max())?;
    let n = shells.node_count();
    if label_matrix.node_count() != n {
        return Err(Error::input("label matrix row count mismatch"));
    }
    let c = label_matrix.class_count();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    let mut counts = vec![0u32; c];
    for i in 0..n {
        for (k, &d) in ds.iter().enumerate() {
            counts.iter_mut().for_each(|x| *x = 0);
            for &j in shells.shell(i, d) {
                if let Some(m) = label_matrix.row_class(j as usize) {
                    counts[m] += 1;
                }
            }
            let offset = (k * c) as u32;
            for (m, &cnt) in counts.iter().enumerate() {
                if cnt > 0 {
                    rows[i].push((offset + m as u32, cnt as f64));
                }
            }
        }
    }
    let blocks = ds
        .iter()
        .enumerate()
        .map(|(k, &d)| FeatureBlock::new(format!("ncc_d{d}"), k * c, (k + 1) * c))
        .collect();
    SparseFeatureMatrix::from_rows(c * ds.len(), rows, blocks)
}

/// Neighbor class probabilities: each distance block of NCC divided by its
/// block row sum. A block row summing to zero stays all-zero.
pub fn ncp_features(
    shells: &NeighborhoodShells,
    label_matrix: &LabelMatrix,
    distances: &[usize],
) -> Result<SparseFeatureMatrix> {
    let ncc = ncc_features(shells, label_matrix, distances)?;
    let c = label_matrix.class_count();
    let rows = (0..ncc.n_rows())
        .map(|i| {
            let row = ncc.row(i);
            let mut out = Vec::with_capacity(row.len());
            let mut k = 0;
            while k < row.len() {
                let block = row[k].0 as usize / c;
                let mut end = k;
                while end < row.len() && row[end].0 as usize / c == block {
                    end += 1;
                }
                let sum: f64 = row[k..end].iter().map(|&(_, v)| v).sum();
                for &(col, v) in &row[k..end] {
                    out.push((col, v / sum));
                }
                k = end;
            }
            out
        })
        .collect();
    let blocks = ncc
        .blocks()
        .iter()
        .map(|b| FeatureBlock::new(b.name.replace("ncc", "ncp"), b.start, b.end))
        .collect();
    SparseFeatureMatrix::from_rows(ncc.n_cols(), rows, blocks)
}
