//! Naive Bayes over mixed features: Gaussian likelihoods for continuous
//! columns, smoothed frequency tables for categorical-encoded columns.

use crate::data::{Features, LabeledMatrix};
use crate::error::{Error, Result};
use crate::model::ScoreModel;

#[derive(Debug, Clone, PartialEq)]
pub struct BayesHyper {
    /// Laplace smoothing for frequency tables.
    pub alpha: f64,
    pub variance_floor: f64,
    /// Matrix columns holding encoded categories; all others are Gaussian.
    pub categorical_features: Vec<usize>,
}

impl Default for BayesHyper {
    fn default() -> Self {
        BayesHyper {
            alpha: 1.0,
            variance_floor: 1e-9,
            categorical_features: Vec::new(),
        }
    }
}

/// Per-feature class-conditional model; class index 0 = negative, 1 = positive.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureModel {
    Gaussian {
        mean: [f64; 2],
        var: [f64; 2],
    },
    /// Smoothed frequencies over the encoded values seen in training.
    /// `log_prob[c][k]` is ln P(value = keys[k] | class c); values outside
    /// `keys` get `unseen_log_prob[c]` = ln(alpha / (n_c + alpha * K)).
    Table {
        keys: Vec<i64>,
        log_prob: [Vec<f64>; 2],
        unseen_log_prob: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesParams {
    /// P(class 0), P(class 1); both strictly positive.
    pub log_prior: [f64; 2],
    pub features: Vec<FeatureModel>,
}

const LOG_PROB_FLOOR: f64 = -700.0;

impl BayesParams {
    fn log_likelihood(&self, row: &[f64], class: usize) -> f64 {
        let mut ll = self.log_prior[class];
        for (x, fm) in row.iter().zip(&self.features) {
            ll += match fm {
                FeatureModel::Gaussian { mean, var } => {
                    let m = mean[class];
                    let v = var[class];
                    -0.5 * (std::f64::consts::TAU * v).ln() - (x - m) * (x - m) / (2.0 * v)
                }
                FeatureModel::Table {
                    keys,
                    log_prob,
                    unseen_log_prob,
                } => {
                    let key = x.round() as i64;
                    match keys.binary_search(&key) {
                        Ok(idx) => log_prob[class][idx],
                        Err(_) => unseen_log_prob[class],
                    }
                }
            };
        }
        ll.max(LOG_PROB_FLOOR * (1.0 + self.features.len() as f64))
    }

    /// Posterior probabilities (P(class 0 | x), P(class 1 | x)) via
    /// log-sum-exp normalization; they sum to 1.
    pub fn posteriors(&self, row: &[f64]) -> (f64, f64) {
        let l0 = self.log_likelihood(row, 0);
        let l1 = self.log_likelihood(row, 1);
        let m = l0.max(l1);
        let z = (l0 - m).exp() + (l1 - m).exp();
        ((l0 - m).exp() / z, (l1 - m).exp() / z)
    }

    pub(crate) fn score_rows(&self, features: &Features) -> Vec<f64> {
        features.rows_iter().map(|row| self.posteriors(row).1).collect()
    }
}

/// Fit class priors and per-feature class-conditional distributions.
pub fn train_naive_bayes(train: &LabeledMatrix, hp: &BayesHyper) -> Result<ScoreModel> {
    let n = train.n_rows();
    if n == 0 {
        return Err(Error::Split("cannot train on an empty matrix".into()));
    }
    let pos = train.positives();
    if pos == 0 || pos == n {
        return Err(Error::DegenerateLabels);
    }
    if hp.alpha < 0.0 {
        return Err(Error::config("model.alpha", "must be nonnegative"));
    }
    let d = train.n_cols();
    for &c in &hp.categorical_features {
        if c >= d {
            return Err(Error::config(
                "model.categorical_features",
                format!("column index {c} out of range for {d} features"),
            ));
        }
    }

    let counts = [n - pos, pos];
    let mut features = Vec::with_capacity(d);
    for j in 0..d {
        if hp.categorical_features.contains(&j) {
            // Key set over both classes: smoothed rows then sum to 1 per class.
            let mut keys: Vec<i64> = (0..n)
                .map(|i| train.features.get(i, j).round() as i64)
                .collect();
            keys.sort_unstable();
            keys.dedup();
            let k = keys.len() as f64;
            let mut log_prob = [vec![0.0; keys.len()], vec![0.0; keys.len()]];
            let mut unseen = [0.0; 2];
            for class in 0..2 {
                let mut tally = vec![0usize; keys.len()];
                for i in 0..n {
                    if usize::from(train.labels[i]) == class {
                        let key = train.features.get(i, j).round() as i64;
                        let idx = keys.binary_search(&key).expect("key set covers all rows");
                        tally[idx] += 1;
                    }
                }
                let denom = counts[class] as f64 + hp.alpha * k;
                for (slot, &t) in log_prob[class].iter_mut().zip(&tally) {
                    let p = ((t as f64 + hp.alpha) / denom).max(1e-300);
                    *slot = p.ln();
                }
                unseen[class] = (hp.alpha / denom).max(1e-300).ln();
            }
            features.push(FeatureModel::Table {
                keys,
                log_prob,
                unseen_log_prob: unseen,
            });
        } else {
            let mut mean = [0.0; 2];
            let mut var = [0.0; 2];
            for class in 0..2 {
                let mut sum = 0.0;
                for i in 0..n {
                    if usize::from(train.labels[i]) == class {
                        sum += train.features.get(i, j);
                    }
                }
                let m = sum / counts[class] as f64;
                let mut sq = 0.0;
                for i in 0..n {
                    if usize::from(train.labels[i]) == class {
                        let dlt = train.features.get(i, j) - m;
                        sq += dlt * dlt;
                    }
                }
                mean[class] = m;
                var[class] = (sq / counts[class] as f64).max(hp.variance_floor);
            }
            features.push(FeatureModel::Gaussian { mean, var });
        }
    }

    Ok(ScoreModel::Bayes(BayesParams {
        log_prior: [
            (counts[0] as f64 / n as f64).ln(),
            (counts[1] as f64 / n as f64).ln(),
        ],
        features,
    }))
}
