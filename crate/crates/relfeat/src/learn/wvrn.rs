//! Weighted-vote relational neighbor classifier with relaxation labeling.
//!
//! Labeled nodes are clamped to their one-hot class vector; every other
//! node starts from the training class prior and repeatedly averages its
//! neighbors' score vectors, damped by a decaying schedule
//! `β_t = β₀ · decay^t`. Updates are simultaneous.

use crate::error::{Error, Result};
use crate::graph::{LabelAssignment, RelationGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WvrnParams {
    pub max_iters: usize,
    pub beta0: f64,
    pub decay: f64,
    pub tol: f64,
}

impl Default for WvrnParams {
    fn default() -> Self {
        WvrnParams {
            max_iters: 100,
            beta0: 1.0,
            decay: 0.99,
            tol: 1e-4,
        }
    }
}

impl WvrnParams {
    fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::input("max_iters must be at least 1"));
        }
        if !(self.beta0 > 0.0 && self.beta0 <= 1.0) {
            return Err(Error::input("beta0 must lie in (0, 1]"));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::input("decay must lie in (0, 1]"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::input("tol must be positive"));
        }
        Ok(())
    }
}

/// Per-node class score vectors after relaxation labeling.
///
/// `visible` lists the nodes whose labels are clamped; each class must
/// appear among them at least once.
pub fn wvrn_relaxation_labeling(
    graph: &RelationGraph,
    labels: &LabelAssignment,
    visible: &[usize],
    params: &WvrnParams,
) -> Result<Vec<Vec<f64>>> {
    params.validate()?;
    let n = graph.node_count();
    if labels.node_count() != n {
        return Err(Error::input("graph and labels disagree on node count"));
    }
    let c = labels.class_count();
    let mut clamped = vec![false; n];
    let mut class_counts = vec![0usize; c];
    for &i in visible {
        if i >= n {
            return Err(Error::input(format!("visible node {i} out of range")));
        }
        let m = labels
            .label(i)
            .ok_or_else(|| Error::input(format!("visible node {i} has no label")))?;
        clamped[i] = true;
        class_counts[m] += 1;
    }
    if let Some(m) = class_counts.iter().position(|&k| k == 0) {
        return Err(Error::input(format!(
            "class {m} has no labeled node in the training set"
        )));
    }

    let total: f64 = visible.len() as f64;
    let prior: Vec<f64> = class_counts.iter().map(|&k| k as f64 / total).collect();
    let mut scores: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            if clamped[i] {
                let mut one_hot = vec![0.0; c];
                one_hot[labels.label(i).unwrap()] = 1.0;
                one_hot
            } else {
                prior.clone()
            }
        })
        .collect();

    let mut next = scores.clone();
    let mut beta = params.beta0;
    for _ in 0..params.max_iters {
        let mut max_change = 0.0f64;
        for i in 0..n {
            if clamped[i] {
                continue;
            }
            let mut vote = vec![0.0f64; c];
            let mut z = 0.0;
            for (j, w) in graph.neighbors(i) {
                z += w;
                for m in 0..c {
                    vote[m] += w * scores[j][m];
                }
            }
            if z == 0.0 {
                // isolated node keeps its prior
                next[i].copy_from_slice(&scores[i]);
                continue;
            }
            for m in 0..c {
                let updated = beta * (vote[m] / z) + (1.0 - beta) * scores[i][m];
                max_change = max_change.max((updated - scores[i][m]).abs());
                next[i][m] = updated;
            }
        }
        for i in 0..n {
            if !clamped[i] {
                scores[i].copy_from_slice(&next[i]);
            }
        }
        if max_change <= params.tol {
            break;
        }
        beta *= params.decay;
    }
    Ok(scores)
}

/// Argmax class per node, ties to the lowest class index.
pub fn predict_from_scores(scores: &[Vec<f64>]) -> Vec<usize> {
    scores.iter().map(|row| super::logreg::argmax(row)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(classes: &[&str], y: &[Option<u32>]) -> LabelAssignment {
        LabelAssignment::new(classes.iter().map(|s| s.to_string()).collect(), y.to_vec()).unwrap()
    }

    #[test]
    fn unanimous_neighborhood_converges_to_that_class() {
        // node 2's only neighbors are both class A; the prior washes out
        // after the first full-strength pass
        let g = RelationGraph::from_edges(4, &[(0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let labs = labels(&["A", "B"], &[Some(0), Some(0), None, Some(1)]);
        let scores =
            wvrn_relaxation_labeling(&g, &labs, &[0, 1, 3], &WvrnParams::default()).unwrap();
        assert!((scores[2][0] - 1.0).abs() < 1e-9);
        assert!(scores[2][1].abs() < 1e-9);
    }

    #[test]
    fn balanced_neighbors_split_evenly() {
        let g = RelationGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let labs = labels(&["A", "B"], &[Some(0), None, Some(1)]);
        let scores =
            wvrn_relaxation_labeling(&g, &labs, &[0, 2], &WvrnParams::default()).unwrap();
        assert!((scores[1][0] - 0.5).abs() < 1e-9);
        assert!((scores[1][1] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn two_triangles_follow_their_seeds() {
        let g = RelationGraph::from_edges(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (0, 2, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (3, 5, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap();
        let labs = labels(
            &["A", "B"],
            &[Some(0), None, None, None, None, Some(1)],
        );
        let scores =
            wvrn_relaxation_labeling(&g, &labs, &[0, 5], &WvrnParams::default()).unwrap();
        let pred = predict_from_scores(&scores);
        assert_eq!(&pred[0..3], &[0, 0, 0]);
        assert_eq!(&pred[3..6], &[1, 1, 1]);
    }

    #[test]
    fn scores_stay_on_the_simplex() {
        let g = RelationGraph::from_edges(
            5,
            &[(0, 1, 3.0), (1, 2, 0.5), (2, 3, 1.0), (3, 4, 2.0), (0, 4, 1.0)],
        )
        .unwrap();
        let labs = labels(&["A", "B"], &[Some(0), None, None, None, Some(1)]);
        let scores =
            wvrn_relaxation_labeling(&g, &labs, &[0, 4], &WvrnParams::default()).unwrap();
        for row in &scores {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn invariant_to_uniform_weight_scaling() {
        let edges = [(0usize, 1usize, 1.0), (1, 2, 2.0), (2, 3, 1.5), (0, 3, 0.5)];
        let g1 = RelationGraph::from_edges(4, &edges).unwrap();
        let scaled: Vec<_> = edges.iter().map(|&(i, j, w)| (i, j, 10.0 * w)).collect();
        let g2 = RelationGraph::from_edges(4, &scaled).unwrap();
        let labs = labels(&["A", "B"], &[Some(0), None, None, Some(1)]);
        let s1 = wvrn_relaxation_labeling(&g1, &labs, &[0, 3], &WvrnParams::default()).unwrap();
        let s2 = wvrn_relaxation_labeling(&g2, &labs, &[0, 3], &WvrnParams::default()).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn isolated_unlabeled_node_keeps_prior() {
        let g = RelationGraph::from_edges(4, &[(0, 1, 1.0)]).unwrap();
        let labs = labels(&["A", "B"], &[Some(0), Some(1), None, None]);
        let scores =
            wvrn_relaxation_labeling(&g, &labs, &[0, 1], &WvrnParams::default()).unwrap();
        assert_eq!(scores[2], vec![0.5, 0.5]);
        assert_eq!(scores[3], vec![0.5, 0.5]);
    }

    #[test]
    fn missing_class_in_training_rejected() {
        let g = RelationGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let labs = labels(&["A", "B"], &[Some(0), Some(1)]);
        assert!(wvrn_relaxation_labeling(&g, &labs, &[0], &WvrnParams::default()).is_err());
    }
}
