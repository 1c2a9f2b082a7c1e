//! ROC curve construction and trapezoidal AUC.

use crate::error::{Error, Result};

/// One curve point: the (FPR, TPR) at `threshold` (predict positive when
/// score >= threshold).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// An ROC curve. The first point is (0,0) at the +inf sentinel, the last is
/// (1,1) at the smallest observed score; tied scores collapse into a single
/// point, which makes the total-tie curve the exact diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
}

impl RocCurve {
    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let first = self.points.first().ok_or(Error::EmptyEvaluation)?;
        let last = self.points.last().unwrap();
        if first.fpr != 0.0 || first.tpr != 0.0 {
            return Err(Error::Schema("roc curve must start at (0,0)".into()));
        }
        if last.fpr != 1.0 || last.tpr != 1.0 {
            return Err(Error::Schema("roc curve must end at (1,1)".into()));
        }
        for pair in self.points.windows(2) {
            if pair[1].fpr < pair[0].fpr || pair[1].tpr < pair[0].tpr {
                return Err(Error::Schema("roc coordinates must be nondecreasing".into()));
            }
        }
        if self
            .points
            .iter()
            .any(|p| !(0.0..=1.0).contains(&p.fpr) || !(0.0..=1.0).contains(&p.tpr))
        {
            return Err(Error::Schema("roc coordinates must lie in [0,1]".into()));
        }
        Ok(())
    }
}

/// Build the ROC curve of `scores` against `labels`.
///
/// Thresholds are the distinct scores in descending order with a leading
/// +inf sentinel; each point is the confusion rates at that threshold.
pub fn roc_points(scores: &[f64], labels: &[u8]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::Schema(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let p = labels.iter().filter(|&&y| y == 1).count();
    let n = labels.len() - p;
    if p == 0 || n == 0 {
        return Err(Error::DegenerateLabels);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).expect("finite scores"));

    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        // Consume the whole tied group before emitting a point.
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold,
            fpr: fp as f64 / n as f64,
            tpr: tp as f64 / p as f64,
        });
    }
    Ok(RocCurve { points })
}

/// Trapezoidal integral of TPR over FPR.
pub fn auc(curve: &RocCurve) -> f64 {
    let mut area = 0.0;
    for pair in curve.points.windows(2) {
        area += (pair[1].fpr - pair[0].fpr) * (pair[1].tpr + pair[0].tpr) / 2.0;
    }
    area
}

/// AUC computed directly from scores.
pub fn auc_for(scores: &[f64], labels: &[u8]) -> Result<f64> {
    Ok(auc(&roc_points(scores, labels)?))
}
