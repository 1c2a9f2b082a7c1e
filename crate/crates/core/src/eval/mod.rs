//! The evaluation stack: confusion matrices, the four scalar metrics, ROC
//! construction, AUC, and decision-threshold search.
//!
//! All operations are pure; a score equal to the threshold predicts
//! positive.

mod confusion;
mod evaluate;
mod roc;
mod threshold;

pub use confusion::{
    averaged_metrics, confusion_at, metrics_from_counts, AveragedMetrics, ConfusionCounts, Metrics,
};
pub use evaluate::{evaluate, evaluate_scores, Evaluation, MetricBundle};
pub use roc::{auc, auc_for, roc_points, RocCurve, RocPoint};
pub use threshold::{optimal_threshold, ThresholdChoice, ThresholdCriterion};
