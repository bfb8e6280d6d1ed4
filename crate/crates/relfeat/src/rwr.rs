//! Random walk with restart: steady-state visit distributions per source
//! node, turned into feature rows by column-wise L2 normalization.
//!
//! The walk follows transition probabilities `W_ij = w_ij / Σ_j w_ij` and
//! jumps back to its source with probability `r` at every step. The
//! steady-state distribution `p_i` for source `i` is the fixed point of
//!
//! ```text
//! p_i(j) = (1 - r) · Σ_k W_kj · p_i(k) + r · [j = i]
//! ```
//!
//! i.e. probability mass flows along outgoing transitions, so every `p_i`
//! is a distribution over nodes and the columns of the steady-state matrix
//! sum to one. Mass that reaches a node without neighbors is returned to
//! the source, which keeps the columns stochastic; after singleton removal
//! this path is never taken.

use crate::error::{Error, Result};
use crate::graph::RelationGraph;
use crate::sparse::{FeatureBlock, SparseFeatureMatrix};

/// Row-stochastic transition probabilities of a graph.
///
/// Row `i` holds `(j, w_ij / Σ w_i·)` pairs; rows of isolated nodes are
/// empty (all-zero).
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<(u32, f64)>>,
}

impl TransitionMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `(target, probability)` pairs of row `i`.
    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.rows[i].iter().map(|&(_, p)| p).sum()
    }
}

/// L1-normalize every row of the adjacency.
pub fn transition_matrix(graph: &RelationGraph) -> TransitionMatrix {
    let n = graph.node_count();
    let rows = (0..n)
        .map(|i| {
            let total = graph.weighted_degree(i);
            if total > 0.0 {
                graph
                    .neighbors(i)
                    .map(|(j, w)| (j as u32, w / total))
                    .collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    TransitionMatrix { n, rows }
}

/// Dense n×n steady-state matrix; column `i` is the distribution of the
/// walk restarting at `i`.
#[derive(Debug, Clone)]
pub struct SteadyStateMatrix {
    n: usize,
    restart: f64,
    // column-major: columns[i * n + j] = p_i(j)
    columns: Vec<f64>,
    residual: f64,
    max_iterations: usize,
}

impl SteadyStateMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn restart(&self) -> f64 {
        self.restart
    }

    /// Worst successive-iterate ∞-norm change at termination, over all
    /// columns.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Largest per-column iteration count used.
    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i * self.n..(i + 1) * self.n]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.columns[col * self.n + row]
    }
}

/// Solve every column of the steady state by power iteration from `e_i`.
///
/// Stops a column once the successive-iterate ∞-norm change drops to
/// `tol`; the iteration contracts with factor `1 - r`, so the iteration
/// count is bounded by `log(tol) / log(1 - r)` plus a constant.
pub fn rwr_steady_state(
    w: &TransitionMatrix,
    r: f64,
    tol: f64,
    max_iter: usize,
) -> Result<SteadyStateMatrix> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::input(format!("restart probability {r} not in (0, 1)")));
    }
    if !(tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    if max_iter < 1 {
        return Err(Error::input("max_iter must be at least 1"));
    }
    let n = w.node_count();
    let mut columns = vec![0.0; n * n];
    let mut worst_residual = 0.0f64;
    let mut max_iterations = 0usize;
    let mut next = vec![0.0f64; n];
    for src in 0..n {
        let p = &mut columns[src * n..(src + 1) * n];
        p[src] = 1.0;
        let mut converged = false;
        for it in 1..=max_iter {
            // propagate mass along transitions; dangling mass restarts
            next.iter_mut().for_each(|x| *x = 0.0);
            let mut dangling = 0.0;
            for k in 0..n {
                let mass = p[k];
                if mass == 0.0 {
                    continue;
                }
                let row = w.row(k);
                if row.is_empty() {
                    dangling += mass;
                    continue;
                }
                for &(j, prob) in row {
                    next[j as usize] += mass * prob;
                }
            }
            let mut change = 0.0f64;
            for j in 0..n {
                let mut v = (1.0 - r) * next[j];
                if j == src {
                    v += r + (1.0 - r) * dangling;
                }
                change = change.max((v - p[j]).abs());
                p[j] = v;
            }
            if change <= tol {
                worst_residual = worst_residual.max(change);
                max_iterations = max_iterations.max(it);
                converged = true;
                break;
            }
            if it == max_iter {
                return Err(Error::Convergence {
                    residual: change,
                    iters: max_iter,
                });
            }
        }
        debug_assert!(converged);
    }
    Ok(SteadyStateMatrix {
        n,
        restart: r,
        columns,
        residual: worst_residual,
        max_iterations,
    })
}

/// Column-wise L2 normalization of the steady state, emitted row-wise as
/// features. Entries smaller than `eps` are dropped; `eps = 0` keeps every
/// nonzero entry.
pub fn rwr_features(p: &SteadyStateMatrix, eps: f64) -> Result<SparseFeatureMatrix> {
    let n = p.node_count();
    let mut scale = vec![0.0f64; n];
    for i in 0..n {
        let norm = p.column(i).iter().map(|v| v * v).sum::<f64>().sqrt();
        scale[i] = if norm > 0.0 { 1.0 / norm } else { 0.0 };
    }
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for col in 0..n {
        let s = scale[col];
        let column = p.column(col);
        for (row, &v) in column.iter().enumerate() {
            let value = v * s;
            if value != 0.0 && value >= eps {
                rows[row].push((col as u32, value));
            }
        }
    }
    SparseFeatureMatrix::from_rows(n, rows, vec![FeatureBlock::new("rwr", 0, n)])
}
