//! Binary CART on Gini impurity.

use rayon::prelude::*;

use crate::data::{Features, LabeledMatrix};
use crate::error::Result;
use crate::model::ScoreModel;
use crate::rng::SplitMix64;

/// A binary tree node. Internal nodes route `x[feature] < threshold` left,
/// otherwise right. Leaf values are positive-class probabilities for
/// classification trees and additive scores for boosted regression trees.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn score(&self, row: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { value } => return *value,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] < *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeHyper {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeHyper {
    fn default() -> Self {
        TreeHyper {
            max_depth: 8,
            min_samples_leaf: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    pub root: TreeNode,
    pub n_features: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl TreeParams {
    pub(crate) fn score_rows(&self, features: &Features) -> Vec<f64> {
        features.rows_iter().map(|row| self.root.score(row)).collect()
    }
}

/// Gini impurity of a binary node with `pos` positives out of `total`.
pub fn gini_impurity(pos: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let p = pos / total;
    2.0 * p * (1.0 - p)
}

/// One candidate split with its impurity gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    pub gain: f64,
}

/// Deterministic total order over candidates: higher gain first, ties broken
/// by lower feature index, then lower threshold.
fn better(a: SplitCandidate, b: SplitCandidate) -> SplitCandidate {
    if a.gain > b.gain
        || (a.gain == b.gain
            && (a.feature < b.feature || (a.feature == b.feature && a.threshold < b.threshold)))
    {
        a
    } else {
        b
    }
}

fn best_split_for_feature(
    features: &Features,
    labels: &[u8],
    rows: &[usize],
    feature: usize,
    min_leaf: usize,
    parent_gini: f64,
) -> Option<SplitCandidate> {
    let n = rows.len();
    let mut pairs: Vec<(f64, u8)> = rows
        .iter()
        .map(|&r| (features.get(r, feature), labels[r]))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));

    let total_pos: usize = pairs.iter().filter(|(_, y)| *y == 1).count();
    let mut best: Option<SplitCandidate> = None;
    let mut left_pos = 0usize;
    for i in 1..n {
        if pairs[i - 1].1 == 1 {
            left_pos += 1;
        }
        // Candidate thresholds sit at midpoints between consecutive distinct
        // values only.
        if pairs[i].0 == pairs[i - 1].0 {
            continue;
        }
        if i < min_leaf || n - i < min_leaf {
            continue;
        }
        let left_n = i as f64;
        let right_n = (n - i) as f64;
        let right_pos = (total_pos - left_pos) as f64;
        let weighted = (left_n / n as f64) * gini_impurity(left_pos as f64, left_n)
            + (right_n / n as f64) * gini_impurity(right_pos, right_n);
        let gain = parent_gini - weighted;
        // Zero-gain splits are kept: an impure node may need a gainless cut
        // (xor-like structure) before a deeper split separates the classes.
        if gain < 0.0 {
            continue;
        }
        let candidate = SplitCandidate {
            feature,
            threshold: (pairs[i - 1].0 + pairs[i].0) / 2.0,
            gain,
        };
        best = Some(match best {
            Some(b) => better(candidate, b),
            None => candidate,
        });
    }
    best
}

/// Exhaustive best Gini split over the given feature set. Candidate
/// thresholds are midpoints between consecutive distinct sorted values.
/// The per-feature scans run in parallel; the reduction uses a total order,
/// so the winner is independent of scheduling.
pub fn best_gini_split(
    features: &Features,
    labels: &[u8],
    rows: &[usize],
    feature_set: &[usize],
    min_leaf: usize,
) -> Option<SplitCandidate> {
    let pos = rows.iter().filter(|&&r| labels[r] == 1).count() as f64;
    let parent_gini = gini_impurity(pos, rows.len() as f64);
    if parent_gini == 0.0 {
        return None;
    }
    feature_set
        .par_iter()
        .filter_map(|&f| best_split_for_feature(features, labels, rows, f, min_leaf, parent_gini))
        .reduce_with(better)
}

pub(crate) struct GiniGrower<'a> {
    pub features: &'a Features,
    pub labels: &'a [u8],
    pub max_depth: usize,
    pub min_leaf: usize,
    pub m_try: usize,
    /// Feature subsampling stream; `None` searches every feature.
    pub rng: Option<SplitMix64>,
    /// Total weighted impurity decrease per feature, over root sample size.
    pub importance: Vec<f64>,
    pub n_root: f64,
}

impl GiniGrower<'_> {
    pub fn grow(&mut self, rows: &[usize], depth: usize) -> TreeNode {
        let pos = rows.iter().filter(|&&r| self.labels[r] == 1).count();
        let leaf = TreeNode::Leaf {
            value: pos as f64 / rows.len() as f64,
        };
        if depth >= self.max_depth || pos == 0 || pos == rows.len() {
            return leaf;
        }

        let d = self.features.n_cols();
        let subset: Vec<usize> = match &mut self.rng {
            Some(rng) if self.m_try < d => {
                let mut s = rng.sample_indices(d, self.m_try);
                s.sort_unstable();
                s
            }
            _ => (0..d).collect(),
        };

        let Some(split) =
            best_gini_split(self.features, self.labels, rows, &subset, self.min_leaf)
        else {
            return leaf;
        };

        self.importance[split.feature] += (rows.len() as f64 / self.n_root) * split.gain;

        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.features.get(r, split.feature) < split.threshold);
        let left = self.grow(&left_rows, depth + 1);
        let right = self.grow(&right_rows, depth + 1);
        TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Train a CART classification tree. Leaves hold the positive-class
/// fraction of their training rows.
pub fn train_tree(train: &LabeledMatrix, hp: &TreeHyper) -> Result<ScoreModel> {
    let rows: Vec<usize> = (0..train.n_rows()).collect();
    let mut grower = GiniGrower {
        features: &train.features,
        labels: &train.labels,
        max_depth: hp.max_depth,
        min_leaf: hp.min_samples_leaf,
        m_try: train.n_cols(),
        rng: None,
        importance: vec![0.0; train.n_cols()],
        n_root: train.n_rows() as f64,
    };
    let root = grower.grow(&rows, 0);
    Ok(ScoreModel::Tree(TreeParams {
        root,
        n_features: train.n_cols(),
        max_depth: hp.max_depth,
        min_samples_leaf: hp.min_samples_leaf,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Features;

    fn matrix(rows: &[(&[f64], u8)]) -> LabeledMatrix {
        let d = rows[0].0.len();
        let mut data = Vec::new();
        let mut labels = Vec::new();
        for (r, y) in rows {
            data.extend_from_slice(r);
            labels.push(*y);
        }
        LabeledMatrix::new(
            Features::new(data, rows.len(), d).unwrap(),
            labels,
            (0..d).map(|i| format!("f{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn gini_endpoints() {
        assert_eq!(gini_impurity(0.0, 10.0), 0.0);
        assert_eq!(gini_impurity(10.0, 10.0), 0.0);
        assert_eq!(gini_impurity(5.0, 10.0), 0.5);
    }

    #[test]
    fn pure_input_yields_single_leaf() {
        let m = matrix(&[(&[1.0], 1), (&[2.0], 1), (&[3.0], 1)]);
        let model = train_tree(&m, &TreeHyper::default()).unwrap();
        match model {
            ScoreModel::Tree(p) => assert_eq!(p.root, TreeNode::Leaf { value: 1.0 }),
            _ => unreachable!(),
        }
    }

    #[test]
    fn xor_shattered_at_depth_two() {
        let m = matrix(&[
            (&[0.0, 0.0], 0),
            (&[0.0, 1.0], 1),
            (&[1.0, 0.0], 1),
            (&[1.0, 1.0], 0),
        ]);
        let hp = TreeHyper {
            max_depth: 2,
            min_samples_leaf: 1,
        };
        let model = train_tree(&m, &hp).unwrap();
        let scores = model.predict_scores(&m.features).unwrap();
        for (s, y) in scores.iter().zip(&m.labels) {
            let predicted = u8::from(*s >= 0.5);
            assert_eq!(predicted, *y, "xor row misclassified");
        }
    }

    #[test]
    fn split_respects_min_leaf() {
        let m = matrix(&[
            (&[1.0], 0),
            (&[2.0], 0),
            (&[3.0], 0),
            (&[4.0], 1),
            (&[5.0], 1),
            (&[6.0], 1),
        ]);
        let split = best_gini_split(&m.features, &m.labels, &[0, 1, 2, 3, 4, 5], &[0], 3).unwrap();
        assert_eq!(split.threshold, 3.5);
        assert!(best_gini_split(&m.features, &m.labels, &[0, 1, 2, 3, 4, 5], &[0], 4).is_none());
    }

    #[test]
    fn ties_prefer_lowest_feature_then_threshold() {
        // Both features separate perfectly; feature 0 must win.
        let m = matrix(&[(&[0.0, 0.0], 0), (&[1.0, 1.0], 1)]);
        let split = best_gini_split(&m.features, &m.labels, &[0, 1], &[0, 1], 1).unwrap();
        assert_eq!(split.feature, 0);
    }

    #[test]
    fn depth_bound_is_respected() {
        let rows: Vec<(Vec<f64>, u8)> = (0..64)
            .map(|i| (vec![i as f64], u8::from(i % 2 == 0)))
            .collect();
        let refs: Vec<(&[f64], u8)> = rows.iter().map(|(r, y)| (r.as_slice(), *y)).collect();
        let m = matrix(&refs);
        let hp = TreeHyper {
            max_depth: 3,
            min_samples_leaf: 1,
        };
        let model = train_tree(&m, &hp).unwrap();
        match model {
            ScoreModel::Tree(p) => assert!(p.root.depth() <= 3),
            _ => unreachable!(),
        }
    }
}
