//! Class-balanced train/test splits.

use crate::error::{Error, Result};
use crate::graph::LabelAssignment;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A deterministic train/test split. Train and test are disjoint, sorted,
/// and together cover every node; nodes without a known label always land
/// in the test side (they are skipped when scoring).
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub ratio: f64,
    pub seed: u64,
}

/// Per class with `n_c` members, the train side receives
/// `round(ratio · n_c)` members clamped to `[1, n_c - 1]`; a single-member
/// class goes entirely to train. Sampling is without replacement from a
/// seeded generator.
pub fn class_balanced_split(
    labels: &LabelAssignment,
    ratio: f64,
    seed: u64,
) -> Result<SplitSpec> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::input(format!("ratio {ratio} not in (0, 1)")));
    }
    let members = labels.members_by_class();
    for (m, nodes) in members.iter().enumerate() {
        if nodes.is_empty() {
            return Err(Error::input(format!("class {m} has no labeled member")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; labels.node_count()];
    for nodes in &members {
        let n_c = nodes.len();
        let take = if n_c == 1 {
            1
        } else {
            let want = (ratio * n_c as f64).round() as usize;
            want.clamp(1, n_c - 1)
        };
        let mut shuffled = nodes.clone();
        shuffled.shuffle(&mut rng);
        for &i in shuffled.iter().take(take) {
            in_train[i] = true;
        }
    }
    let train: Vec<usize> = (0..labels.node_count()).filter(|&i| in_train[i]).collect();
    let test: Vec<usize> = (0..labels.node_count()).filter(|&i| !in_train[i]).collect();
    Ok(SplitSpec {
        train,
        test,
        ratio,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced_labels(per_class: &[usize]) -> LabelAssignment {
        let classes: Vec<String> = (0..per_class.len()).map(|m| format!("c{m}")).collect();
        let mut y = Vec::new();
        for (m, &k) in per_class.iter().enumerate() {
            for _ in 0..k {
                y.push(Some(m as u32));
            }
        }
        LabelAssignment::new(classes, y).unwrap()
    }

    #[test]
    fn ratio_point_two_on_two_balanced_classes() {
        let labels = balanced_labels(&[5, 5]);
        let split = class_balanced_split(&labels, 0.2, 3).unwrap();
        assert_eq!(split.train.len(), 2);
        for m in 0..2 {
            let count = split
                .train
                .iter()
                .filter(|&&i| labels.label(i) == Some(m))
                .count();
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn ratio_half_on_four_plus_four() {
        let labels = balanced_labels(&[4, 4]);
        let split = class_balanced_split(&labels, 0.5, 9).unwrap();
        assert_eq!(split.train.len(), 4);
        assert_eq!(split.test.len(), 4);
        let overlap = split.train.iter().filter(|i| split.test.contains(i)).count();
        assert_eq!(overlap, 0);
    }

    #[test]
    fn deterministic_given_seed() {
        let labels = balanced_labels(&[10, 7, 3]);
        let a = class_balanced_split(&labels, 0.3, 42).unwrap();
        let b = class_balanced_split(&labels, 0.3, 42).unwrap();
        assert_eq!(a, b);
        let c = class_balanced_split(&labels, 0.3, 43).unwrap();
        assert_ne!(a.train, c.train);
    }

    #[test]
    fn single_member_class_goes_to_train() {
        let labels = balanced_labels(&[1, 6]);
        let split = class_balanced_split(&labels, 0.5, 0).unwrap();
        assert!(split.train.contains(&0));
    }

    #[test]
    fn every_class_keeps_a_test_member_when_possible() {
        let labels = balanced_labels(&[2, 2]);
        let split = class_balanced_split(&labels, 0.9, 1).unwrap();
        for m in 0..2 {
            let test_count = split
                .test
                .iter()
                .filter(|&&i| labels.label(i) == Some(m))
                .count();
            assert_eq!(test_count, 1);
        }
    }

    #[test]
    fn unlabeled_nodes_go_to_test() {
        let labels = LabelAssignment::new(
            vec!["A".into(), "B".into()],
            vec![Some(0), None, Some(1), Some(0), Some(1)],
        )
        .unwrap();
        let split = class_balanced_split(&labels, 0.5, 2).unwrap();
        assert!(split.test.contains(&1));
        let mut all: Vec<usize> = split.train.iter().chain(&split.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_degenerate_ratio() {
        let labels = balanced_labels(&[3, 3]);
        assert!(class_balanced_split(&labels, 0.0, 0).is_err());
        assert!(class_balanced_split(&labels, 1.0, 0).is_err());
    }
}
