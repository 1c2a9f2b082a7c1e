//! Confusion counts and the scalar metrics derived from them.

use crate::error::{Error, Result};

/// TP/FP/FN/TN counts at a fixed threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }
}

/// Precision, recall, accuracy, and F1 derived from confusion counts.
///
/// Zero-denominator metrics are `None` rather than a silent zero, so
/// undefined cells stay visible in comparison tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub accuracy: f64,
    pub f1: Option<f64>,
}

/// Count the confusion matrix of `scores` against `labels` at `threshold`.
/// A score equal to the threshold predicts positive.
pub fn confusion_at(scores: &[f64], labels: &[u8], threshold: f64) -> Result<ConfusionCounts> {
    if scores.len() != labels.len() {
        return Err(Error::Schema(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut c = ConfusionCounts {
        tp: 0,
        fp: 0,
        fn_: 0,
        tn: 0,
    };
    for (&s, &y) in scores.iter().zip(labels) {
        let predicted_positive = s >= threshold;
        match (predicted_positive, y) {
            (true, 1) => c.tp += 1,
            (true, _) => c.fp += 1,
            (false, 1) => c.fn_ += 1,
            (false, _) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Exact metric formulas: precision = tp/(tp+fp), recall = tp/(tp+fn),
/// accuracy = (tp+tn)/total, f1 = harmonic mean of precision and recall.
///
/// Precision is undefined when nothing was predicted positive, recall when
/// there are no actual positives, and f1 when either is undefined or both
/// are zero.
pub fn metrics_from_counts(c: &ConfusionCounts) -> Result<Metrics> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptyEvaluation);
    }
    let precision = match c.tp + c.fp {
        0 => None,
        den => Some(c.tp as f64 / den as f64),
    };
    let recall = match c.tp + c.fn_ {
        0 => None,
        den => Some(c.tp as f64 / den as f64),
    };
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        _ => None,
    };
    Ok(Metrics {
        precision,
        recall,
        accuracy: (c.tp + c.tn) as f64 / total as f64,
        f1,
    })
}

/// Per-class averaging variants used to reconcile aggregate tables whose
/// convention is unstated. Positive-class (binary) metrics stay the default
/// everywhere else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedMetrics {
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
}

pub fn averaged_metrics(c: &ConfusionCounts) -> Result<AveragedMetrics> {
    if c.total() == 0 {
        return Err(Error::EmptyEvaluation);
    }
    // Metrics of the negative class are the positive-class metrics of the
    // label-swapped matrix.
    let swapped = ConfusionCounts {
        tp: c.tn,
        fp: c.fn_,
        fn_: c.fp,
        tn: c.tp,
    };
    let pos = metrics_from_counts(c)?;
    let neg = metrics_from_counts(&swapped)?;
    let (pp, pr, pf) = (
        pos.precision.unwrap_or(0.0),
        pos.recall.unwrap_or(0.0),
        pos.f1.unwrap_or(0.0),
    );
    let (np, nr, nf) = (
        neg.precision.unwrap_or(0.0),
        neg.recall.unwrap_or(0.0),
        neg.f1.unwrap_or(0.0),
    );
    let p_share = c.positives() as f64 / c.total() as f64;
    let n_share = 1.0 - p_share;
    Ok(AveragedMetrics {
        macro_precision: (pp + np) / 2.0,
        macro_recall: (pr + nr) / 2.0,
        macro_f1: (pf + nf) / 2.0,
        weighted_precision: p_share * pp + n_share * np,
        weighted_recall: p_share * pr + n_share * nr,
        weighted_f1: p_share * pf + n_share * nf,
    })
}
