//! Random forest: bagged CART trees with per-split feature subsampling.

use rayon::prelude::*;

use crate::data::{Features, LabeledMatrix};
use crate::error::{Error, Result};
use crate::model::tree::{GiniGrower, TreeNode};
use crate::model::ScoreModel;
use crate::rng::{derive_seed, SplitMix64};

#[derive(Debug, Clone, PartialEq)]
pub struct ForestHyper {
    pub n_trees: usize,
    /// Features sampled (without replacement) at each split; `None` means
    /// ceil(sqrt(d)).
    pub m_try: Option<usize>,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Draw each tree's sample with replacement. Disabled, every tree sees
    /// the full training set (useful to compare against a single tree).
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestHyper {
    fn default() -> Self {
        ForestHyper {
            n_trees: 100,
            m_try: None,
            max_depth: 12,
            min_samples_leaf: 1,
            bootstrap: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestParams {
    pub trees: Vec<TreeNode>,
    /// Seed that drew each tree's bootstrap sample and feature subsets.
    pub tree_seeds: Vec<u64>,
    pub m_try: usize,
    pub n_features: usize,
    /// Total Gini decrease attributed per feature, normalized to sum 1.
    pub feature_importances: Vec<f64>,
}

impl ForestParams {
    pub(crate) fn score_rows(&self, features: &Features) -> Vec<f64> {
        let k = self.trees.len() as f64;
        features
            .rows_iter()
            .map(|row| self.trees.iter().map(|t| t.score(row)).sum::<f64>() / k)
            .collect()
    }
}

/// Train a random forest. Each tree's seed derives from the master seed and
/// the tree index, so training is deterministic and trees can be built in
/// parallel in any order.
pub fn train_forest(train: &LabeledMatrix, hp: &ForestHyper) -> Result<ScoreModel> {
    if train.n_rows() == 0 {
        return Err(Error::Split("cannot train on an empty matrix".into()));
    }
    let d = train.n_cols();
    let m_try = hp.m_try.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize);
    if m_try == 0 || m_try > d {
        return Err(Error::config(
            "model.m_try",
            format!("m_try {m_try} must lie in 1..={d}"),
        ));
    }
    if hp.n_trees == 0 {
        return Err(Error::config("model.n_trees", "must be at least 1"));
    }

    let n = train.n_rows();
    let tree_seeds: Vec<u64> = (0..hp.n_trees)
        .map(|i| derive_seed(hp.seed, &format!("tree:{i}")))
        .collect();

    let grown: Vec<(TreeNode, Vec<f64>)> = tree_seeds
        .par_iter()
        .map(|&tree_seed| {
            let mut rng = SplitMix64::new(tree_seed);
            let rows: Vec<usize> = if hp.bootstrap {
                (0..n).map(|_| rng.next_below(n)).collect()
            } else {
                (0..n).collect()
            };
            let mut grower = GiniGrower {
                features: &train.features,
                labels: &train.labels,
                max_depth: hp.max_depth,
                min_leaf: hp.min_samples_leaf,
                m_try,
                rng: Some(rng),
                importance: vec![0.0; d],
                n_root: rows.len() as f64,
            };
            let root = grower.grow(&rows, 0);
            (root, grower.importance)
        })
        .collect();

    let mut trees = Vec::with_capacity(hp.n_trees);
    let mut importances = vec![0.0; d];
    for (tree, imp) in grown {
        trees.push(tree);
        for (acc, v) in importances.iter_mut().zip(&imp) {
            *acc += v;
        }
    }
    let total: f64 = importances.iter().sum();
    if total > 0.0 {
        for v in &mut importances {
            *v /= total;
        }
    } else {
        // No split anywhere (e.g. pure targets): report a flat profile so the
        // normalization contract still holds.
        importances = vec![1.0 / d as f64; d];
    }

    Ok(ScoreModel::Forest(ForestParams {
        trees,
        tree_seeds,
        m_try,
        n_features: d,
        feature_importances: importances,
    }))
}
