//! Logistic regression trained by full-batch gradient descent on the mean
//! binary log-loss.

use crate::data::{Features, LabeledMatrix};
use crate::error::{Error, Result};
use crate::model::{mean_log_loss, sigmoid, ScoreModel};

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticHyper {
    pub learning_rate: f64,
    pub max_iters: usize,
    /// Stop when the loss improvement falls below this.
    pub tolerance: f64,
}

impl Default for LogisticHyper {
    fn default() -> Self {
        LogisticHyper {
            learning_rate: 0.1,
            max_iters: 2000,
            tolerance: 1e-8,
        }
    }
}

/// Fitted weights in the original feature space, plus a training trace.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticParams {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub final_loss: f64,
    pub iterations: usize,
}

impl LogisticParams {
    pub(crate) fn score_rows(&self, features: &Features) -> Vec<f64> {
        features
            .rows_iter()
            .map(|row| {
                let z = self.bias
                    + row
                        .iter()
                        .zip(&self.weights)
                        .map(|(x, w)| x * w)
                        .sum::<f64>();
                sigmoid(z)
            })
            .collect()
    }
}

/// Mean log-loss and its gradient at `(weights, bias)`.
///
/// This is the exact objective the trainer descends; tests compare the
/// gradient against central finite differences of the loss.
pub fn loss_and_gradient(
    features: &Features,
    labels: &[u8],
    weights: &[f64],
    bias: f64,
) -> (f64, Vec<f64>, f64) {
    let n = features.n_rows() as f64;
    let d = features.n_cols();
    let mut margins = Vec::with_capacity(features.n_rows());
    let mut grad_w = vec![0.0; d];
    let mut grad_b = 0.0;
    for (i, row) in features.rows_iter().enumerate() {
        let z = bias + row.iter().zip(weights).map(|(x, w)| x * w).sum::<f64>();
        margins.push(z);
        let err = sigmoid(z) - f64::from(labels[i]);
        for (g, x) in grad_w.iter_mut().zip(row) {
            *g += err * x;
        }
        grad_b += err;
    }
    for g in &mut grad_w {
        *g /= n;
    }
    (mean_log_loss(&margins, labels), grad_w, grad_b / n)
}

/// Column means and population stds of a matrix (stds of 0 become 1).
fn column_moments(features: &Features) -> (Vec<f64>, Vec<f64>) {
    let n = features.n_rows() as f64;
    let d = features.n_cols();
    let mut means = vec![0.0; d];
    for row in features.rows_iter() {
        for (m, x) in means.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut vars = vec![0.0; d];
    for row in features.rows_iter() {
        for ((v, x), m) in vars.iter_mut().zip(row).zip(&means) {
            let dlt = x - m;
            *v += dlt * dlt;
        }
    }
    let stds = vars
        .into_iter()
        .map(|v| {
            let s = (v / n).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    (means, stds)
}

pub(crate) fn standardized(features: &Features) -> (Features, Vec<f64>, Vec<f64>) {
    let (means, stds) = column_moments(features);
    let d = features.n_cols();
    let mut data = Vec::with_capacity(features.n_rows() * d);
    for row in features.rows_iter() {
        for j in 0..d {
            data.push((row[j] - means[j]) / stds[j]);
        }
    }
    (
        Features::new(data, features.n_rows(), d).expect("standardized matrix is finite"),
        means,
        stds,
    )
}

/// Train by full-batch gradient descent.
///
/// The descent runs on internally standardized features (a preconditioning
/// step; clinical columns differ in scale by orders of magnitude), and the
/// fitted weights are mapped back to the original feature space before
/// returning, so scoring never depends on the standardization.
pub fn train_logistic(train: &LabeledMatrix, hp: &LogisticHyper) -> Result<ScoreModel> {
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

    let (scaled, means, stds) = standardized(&train.features);
    let d = scaled.n_cols();
    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    let mut prev_loss = f64::INFINITY;
    let mut final_loss = f64::NAN;
    let mut iterations = 0;

    for iter in 0..hp.max_iters {
        let (loss, grad_w, grad_b) = loss_and_gradient(&scaled, &train.labels, &weights, bias);
        if !loss.is_finite() {
            return Err(Error::Divergence(format!(
                "log-loss became non-finite at iteration {iter}; try a smaller learning_rate \
                 than {}",
                hp.learning_rate
            )));
        }
        iterations = iter + 1;
        final_loss = loss;
        if (prev_loss - loss).abs() < hp.tolerance {
            break;
        }
        prev_loss = loss;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= hp.learning_rate * g;
        }
        bias -= hp.learning_rate * grad_b;
    }

    // Fold the standardization back: w'_j = w_j / s_j, b' = b - sum w_j m_j / s_j.
    let mut raw_weights = Vec::with_capacity(d);
    let mut raw_bias = bias;
    for j in 0..d {
        let w = weights[j] / stds[j];
        raw_weights.push(w);
        raw_bias -= w * means[j];
    }

    Ok(ScoreModel::Logistic(LogisticParams {
        weights: raw_weights,
        bias: raw_bias,
        final_loss,
        iterations,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(xs: &[f64], ys: &[u8]) -> LabeledMatrix {
        LabeledMatrix::new(
            Features::new(xs.to_vec(), xs.len(), 1).unwrap(),
            ys.to_vec(),
            vec!["x".into()],
        )
        .unwrap()
    }

    #[test]
    fn zero_parameters_give_ln2_loss() {
        let m = matrix(&[1.0, -2.0, 0.5, 3.0], &[1, 0, 1, 0]);
        let (loss, _, _) = loss_and_gradient(&m.features, &m.labels, &[0.0], 0.0);
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn separable_data_reaches_perfect_training_accuracy() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..50 {
            xs.push(-1.0);
            ys.push(0);
            xs.push(1.0);
            ys.push(1);
        }
        let m = matrix(&xs, &ys);
        let model = train_logistic(&m, &LogisticHyper::default()).unwrap();
        let scores = model.predict_scores(&m.features).unwrap();
        for (s, y) in scores.iter().zip(&ys) {
            assert_eq!(u8::from(*s >= 0.5), *y);
        }
    }

    #[test]
    fn trace_recorded() {
        let m = matrix(&[-1.0, 1.0, -0.5, 2.0], &[0, 1, 0, 1]);
        match train_logistic(&m, &LogisticHyper::default()).unwrap() {
            ScoreModel::Logistic(p) => {
                assert!(p.final_loss.is_finite());
                assert!(p.iterations >= 1);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_class_rejected() {
        let m = matrix(&[1.0, 2.0], &[1, 1]);
        assert!(matches!(
            train_logistic(&m, &LogisticHyper::default()),
            Err(Error::DegenerateLabels)
        ));
    }

    #[test]
    fn affine_shift_compensated_in_bias_leaves_scores_unchanged() {
        let m = matrix(&[0.2, 1.4, -0.7, 2.2], &[0, 1, 0, 1]);
        let model = train_logistic(&m, &LogisticHyper::default()).unwrap();
        let ScoreModel::Logistic(p) = &model else {
            unreachable!()
        };
        let base = model.predict_scores(&m.features).unwrap();

        let c = 3.75;
        let shifted = Features::new(
            m.features.rows_iter().map(|r| r[0] + c).collect(),
            m.n_rows(),
            1,
        )
        .unwrap();
        let adjusted = ScoreModel::Logistic(LogisticParams {
            weights: p.weights.clone(),
            bias: p.bias - c * p.weights[0],
            final_loss: p.final_loss,
            iterations: p.iterations,
        });
        let moved = adjusted.predict_scores(&shifted).unwrap();
        for (a, b) in base.iter().zip(&moved) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
