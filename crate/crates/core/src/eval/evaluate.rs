//! End-to-end model evaluation on a labeled test set.

use crate::data::LabeledMatrix;
use crate::error::Result;
use crate::eval::confusion::{confusion_at, metrics_from_counts, ConfusionCounts};
use crate::eval::roc::{auc, roc_points, RocCurve};
use crate::eval::threshold::{optimal_threshold, ThresholdChoice, ThresholdCriterion};
use crate::model::ScoreModel;

/// The five headline metrics. Threshold-dependent values come from the
/// chosen threshold; AUC is threshold-free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBundle {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub f1: Option<f64>,
    pub auc: f64,
}

/// Everything produced by one evaluation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub metrics: MetricBundle,
    pub counts: ConfusionCounts,
    pub curve: RocCurve,
    pub threshold: ThresholdChoice,
    /// Model scores on the test rows, in row order.
    pub scores: Vec<f64>,
}

/// Score the test set, choose a threshold per the criterion, and derive the
/// confusion matrix, scalar metrics, ROC curve, and AUC.
pub fn evaluate(
    model: &ScoreModel,
    test: &LabeledMatrix,
    criterion: ThresholdCriterion,
) -> Result<Evaluation> {
    let scores = model.predict_scores(&test.features)?;
    evaluate_scores(&scores, &test.labels, criterion)
}

/// [`evaluate`] starting from precomputed scores.
pub fn evaluate_scores(
    scores: &[f64],
    labels: &[u8],
    criterion: ThresholdCriterion,
) -> Result<Evaluation> {
    let choice = optimal_threshold(scores, labels, criterion)?;
    let counts = confusion_at(scores, labels, choice.threshold)?;
    let metrics = metrics_from_counts(&counts)?;
    let curve = roc_points(scores, labels)?;
    let area = auc(&curve);
    Ok(Evaluation {
        metrics: MetricBundle {
            precision: metrics.precision,
            recall: metrics.recall,
            accuracy: metrics.accuracy,
            f1: metrics.f1,
            auc: area,
        },
        counts,
        curve,
        threshold: choice,
        scores: scores.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Features;
    use crate::model::tree::{TreeNode, TreeParams};

    fn constant_model(value: f64) -> ScoreModel {
        ScoreModel::Tree(TreeParams {
            root: TreeNode::Leaf { value },
            n_features: 1,
            max_depth: 1,
            min_samples_leaf: 1,
        })
    }

    fn test_set(labels: Vec<u8>) -> LabeledMatrix {
        let n = labels.len();
        LabeledMatrix::new(
            Features::new((0..n).map(|i| i as f64).collect(), n, 1).unwrap(),
            labels,
            vec!["x".into()],
        )
        .unwrap()
    }

    #[test]
    fn constant_scores_collapse_to_diagonal() {
        let ev = evaluate(
            &constant_model(0.3),
            &test_set(vec![0, 1, 0, 1]),
            ThresholdCriterion::Fixed(0.5),
        )
        .unwrap();
        assert_eq!(ev.metrics.auc, 0.5);
        assert_eq!(ev.curve.points.len(), 2);
    }

    #[test]
    fn always_positive_leaf_has_full_recall() {
        let ev = evaluate(
            &constant_model(1.0),
            &test_set(vec![1, 0, 1, 0, 0]),
            ThresholdCriterion::Fixed(0.5),
        )
        .unwrap();
        assert_eq!(ev.metrics.recall, Some(1.0));
        assert_eq!(ev.counts.fp, 3);
        assert_eq!(ev.counts.fn_, 0);
    }

    #[test]
    fn bundle_f1_consistent_with_stored_precision_recall() {
        let scores = [0.9, 0.7, 0.6, 0.2, 0.4, 0.8];
        let labels = [1, 1, 0, 0, 1, 0];
        let ev = evaluate_scores(&scores, &labels, ThresholdCriterion::MaxF1).unwrap();
        let (p, r, f1) = (
            ev.metrics.precision.unwrap(),
            ev.metrics.recall.unwrap(),
            ev.metrics.f1.unwrap(),
        );
        assert!((f1 - 2.0 * p * r / (p + r)).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_propagates() {
        let model = constant_model(0.5);
        let bad = LabeledMatrix::new(
            Features::new(vec![0.0, 0.0], 1, 2).unwrap(),
            vec![1],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert!(evaluate(&model, &bad, ThresholdCriterion::MaxF1).is_err());
    }
}
