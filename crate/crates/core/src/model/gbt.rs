//! Gradient-boosted trees with the binary logistic loss.
//!
//! Each round fits a regression tree (variance-reduction splits) to the
//! current residuals y - sigmoid(margin); leaf values take one Newton step,
//! sum(residuals) / sum(p(1-p)), and the shrunken tree output is added to the
//! margin. Scores are sigmoid(margin) unless raw-margin mode is selected for
//! diagnostics.

use rayon::prelude::*;

use crate::data::{Features, LabeledMatrix};
use crate::error::{Error, Result};
use crate::model::tree::TreeNode;
use crate::model::{sigmoid, ScoreModel};

#[derive(Debug, Clone, PartialEq)]
pub struct GbtHyper {
    pub n_rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl Default for GbtHyper {
    fn default() -> Self {
        GbtHyper {
            n_rounds: 100,
            learning_rate: 0.1,
            max_depth: 3,
            min_samples_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbtParams {
    /// Initial log-odds ln(p/(1-p)) of the training base rate.
    pub base_score: f64,
    pub trees: Vec<TreeNode>,
    pub learning_rate: f64,
    pub n_features: usize,
    /// Emit raw margins instead of probabilities (diagnostics only).
    pub raw_margin: bool,
}

impl GbtParams {
    pub(crate) fn margin_rows(&self, features: &Features) -> Vec<f64> {
        features
            .rows_iter()
            .map(|row| {
                self.base_score
                    + self.learning_rate
                        * self.trees.iter().map(|t| t.score(row)).sum::<f64>()
            })
            .collect()
    }

    pub(crate) fn score_rows(&self, features: &Features) -> Vec<f64> {
        let margins = self.margin_rows(features);
        if self.raw_margin {
            margins
        } else {
            margins.into_iter().map(sigmoid).collect()
        }
    }
}

/// Small-denominator guard for Newton leaf values.
const HESSIAN_FLOOR: f64 = 1e-12;

struct ResidualGrower<'a> {
    features: &'a Features,
    residuals: &'a [f64],
    hessians: &'a [f64],
    max_depth: usize,
    min_leaf: usize,
}

#[derive(Clone, Copy)]
struct VarSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn better(a: VarSplit, b: VarSplit) -> VarSplit {
    if a.gain > b.gain
        || (a.gain == b.gain
            && (a.feature < b.feature || (a.feature == b.feature && a.threshold < b.threshold)))
    {
        a
    } else {
        b
    }
}

impl ResidualGrower<'_> {
    /// Variance-reduction gain: sum_L r^2 terms cancel, so the gain is
    /// (sum_L r)^2/n_L + (sum_R r)^2/n_R - (sum r)^2/n.
    fn best_split_for_feature(&self, rows: &[usize], feature: usize) -> Option<VarSplit> {
        let n = rows.len();
        let mut pairs: Vec<(f64, f64)> = rows
            .iter()
            .map(|&r| (self.features.get(r, feature), self.residuals[r]))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));
        let total: f64 = pairs.iter().map(|(_, r)| r).sum();
        let parent = total * total / n as f64;

        let mut best: Option<VarSplit> = None;
        let mut left_sum = 0.0;
        for i in 1..n {
            left_sum += pairs[i - 1].1;
            if pairs[i].0 == pairs[i - 1].0 {
                continue;
            }
            if i < self.min_leaf || n - i < self.min_leaf {
                continue;
            }
            let right_sum = total - left_sum;
            let gain = left_sum * left_sum / i as f64
                + right_sum * right_sum / (n - i) as f64
                - parent;
            if gain <= 0.0 {
                continue;
            }
            let candidate = VarSplit {
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

    fn leaf(&self, rows: &[usize]) -> TreeNode {
        let grad_sum: f64 = rows.iter().map(|&r| self.residuals[r]).sum();
        let hess_sum: f64 = rows.iter().map(|&r| self.hessians[r]).sum();
        let value = if hess_sum < HESSIAN_FLOOR {
            0.0
        } else {
            grad_sum / hess_sum
        };
        TreeNode::Leaf { value }
    }

    fn grow(&self, rows: &[usize], depth: usize) -> TreeNode {
        if depth >= self.max_depth || rows.len() < 2 * self.min_leaf.max(1) {
            return self.leaf(rows);
        }
        let d = self.features.n_cols();
        let split = (0..d)
            .into_par_iter()
            .filter_map(|f| self.best_split_for_feature(rows, f))
            .reduce_with(better);
        let Some(split) = split else {
            return self.leaf(rows);
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| self.features.get(r, split.feature) < split.threshold);
        TreeNode::Internal {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(self.grow(&left_rows, depth + 1)),
            right: Box::new(self.grow(&right_rows, depth + 1)),
        }
    }
}

/// Train a boosted ensemble. Requires both classes in the training labels
/// (the base rate's log-odds must be finite).
pub fn train_gbt(train: &LabeledMatrix, hp: &GbtHyper) -> Result<ScoreModel> {
    let n = train.n_rows();
    if n == 0 {
        return Err(Error::Split("cannot train on an empty matrix".into()));
    }
    let pos = train.positives();
    if pos == 0 || pos == n {
        return Err(Error::DegenerateLabels);
    }
    if hp.learning_rate <= 0.0 {
        return Err(Error::config("model.learning_rate", "must be positive"));
    }

    let p = pos as f64 / n as f64;
    let base_score = (p / (1.0 - p)).ln();
    let mut margins = vec![base_score; n];
    let mut trees = Vec::with_capacity(hp.n_rounds);
    let all_rows: Vec<usize> = (0..n).collect();

    for _ in 0..hp.n_rounds {
        let probs: Vec<f64> = margins.iter().map(|&z| sigmoid(z)).collect();
        let residuals: Vec<f64> = train
            .labels
            .iter()
            .zip(&probs)
            .map(|(&y, &q)| f64::from(y) - q)
            .collect();
        let hessians: Vec<f64> = probs.iter().map(|&q| q * (1.0 - q)).collect();

        let grower = ResidualGrower {
            features: &train.features,
            residuals: &residuals,
            hessians: &hessians,
            max_depth: hp.max_depth,
            min_leaf: hp.min_samples_leaf,
        };
        let tree = grower.grow(&all_rows, 0);
        for (i, margin) in margins.iter_mut().enumerate() {
            *margin += hp.learning_rate * tree.score(train.features.row(i));
        }
        trees.push(tree);
    }

    Ok(ScoreModel::Boosted(GbtParams {
        base_score,
        trees,
        learning_rate: hp.learning_rate,
        n_features: train.n_cols(),
        raw_margin: false,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mean_log_loss;
    use crate::rng::SplitMix64;

    fn random_matrix(n: usize, d: usize, seed: u64) -> LabeledMatrix {
        let mut rng = SplitMix64::new(seed);
        let mut data = Vec::with_capacity(n * d);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let mut s = 0.0;
            for _ in 0..d {
                let v = rng.next_standard_normal();
                s += v;
                data.push(v);
            }
            labels.push(u8::from(s + rng.next_standard_normal() > 0.0));
        }
        LabeledMatrix::new(
            Features::new(data, n, d).unwrap(),
            labels,
            (0..d).map(|i| format!("f{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn balanced_base_rate_gives_zero_base_score() {
        let m = random_matrix(10, 2, 1);
        let mut labels = vec![0u8; 5];
        labels.extend(vec![1u8; 5]);
        let m = LabeledMatrix::new(m.features.clone(), labels, m.feature_names.clone()).unwrap();
        let model = train_gbt(
            &m,
            &GbtHyper {
                n_rounds: 0,
                ..GbtHyper::default()
            },
        )
        .unwrap();
        match &model {
            ScoreModel::Boosted(p) => assert_eq!(p.base_score, 0.0),
            _ => unreachable!(),
        }
        for s in model.predict_scores(&m.features).unwrap() {
            assert_eq!(s, 0.5);
        }
    }

    #[test]
    fn zero_rounds_scores_equal_base_rate() {
        let m = random_matrix(40, 2, 3);
        let p = m.positives() as f64 / m.n_rows() as f64;
        let model = train_gbt(
            &m,
            &GbtHyper {
                n_rounds: 0,
                ..GbtHyper::default()
            },
        )
        .unwrap();
        for s in model.predict_scores(&m.features).unwrap() {
            assert!((s - p).abs() < 1e-12);
        }
    }

    #[test]
    fn training_loss_nonincreasing() {
        let m = random_matrix(200, 5, 17);
        let hp = GbtHyper {
            n_rounds: 20,
            ..GbtHyper::default()
        };
        // Retrain with increasing round counts and compare consecutive losses.
        let mut prev = f64::INFINITY;
        for rounds in 0..=hp.n_rounds {
            let model = train_gbt(
                &m,
                &GbtHyper {
                    n_rounds: rounds,
                    ..hp.clone()
                },
            )
            .unwrap();
            let margins = match &model {
                ScoreModel::Boosted(p) => p.margin_rows(&m.features),
                _ => unreachable!(),
            };
            let loss = mean_log_loss(&margins, &m.labels);
            assert!(
                loss <= prev + 1e-12,
                "loss rose from {prev} to {loss} at round {rounds}"
            );
            prev = loss;
        }
    }

    #[test]
    fn single_class_rejected() {
        let m = random_matrix(10, 2, 5);
        let labels = vec![1u8; 10];
        let m = LabeledMatrix::new(m.features.clone(), labels, m.feature_names.clone()).unwrap();
        assert!(matches!(
            train_gbt(&m, &GbtHyper::default()),
            Err(Error::DegenerateLabels)
        ));
    }

    #[test]
    fn margin_rank_order_matches_probability_rank_order() {
        let m = random_matrix(60, 3, 9);
        let model = train_gbt(
            &m,
            &GbtHyper {
                n_rounds: 10,
                ..GbtHyper::default()
            },
        )
        .unwrap();
        let probs = model.predict_scores(&m.features).unwrap();
        let margins = model.margin_scores(&m.features).unwrap();
        let mut by_prob: Vec<usize> = (0..probs.len()).collect();
        by_prob.sort_by(|&a, &b| probs[a].partial_cmp(&probs[b]).unwrap());
        let mut by_margin: Vec<usize> = (0..margins.len()).collect();
        by_margin.sort_by(|&a, &b| margins[a].partial_cmp(&margins[b]).unwrap());
        assert_eq!(by_prob, by_margin);
    }
}
