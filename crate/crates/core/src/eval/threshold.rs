//! Decision-threshold selection.

use crate::error::{Error, Result};
use crate::eval::confusion::{confusion_at, metrics_from_counts};

/// How the decision threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdCriterion {
    /// Maximize F1 over the candidate thresholds.
    MaxF1,
    /// Maximize Youden's J (TPR - FPR).
    MaxYouden,
    /// Use the given threshold unchanged.
    Fixed(f64),
}

impl ThresholdCriterion {
    pub fn as_str(&self) -> String {
        match self {
            ThresholdCriterion::MaxF1 => "max_f1".into(),
            ThresholdCriterion::MaxYouden => "max_youden".into(),
            ThresholdCriterion::Fixed(v) => format!("fixed:{v}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "max_f1" {
            return Ok(ThresholdCriterion::MaxF1);
        }
        if s == "max_youden" {
            return Ok(ThresholdCriterion::MaxYouden);
        }
        if let Some(rest) = s.strip_prefix("fixed:") {
            let v: f64 = rest.parse().map_err(|_| {
                Error::config("threshold.criterion", format!("bad fixed threshold `{rest}`"))
            })?;
            return Ok(ThresholdCriterion::Fixed(v));
        }
        Err(Error::config(
            "threshold.criterion",
            format!("unknown criterion `{s}` (expected max_f1, max_youden, or fixed:<value>)"),
        ))
    }
}

/// The chosen threshold and the criterion value it achieved (`None` for a
/// fixed threshold, where nothing is optimized).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdChoice {
    pub threshold: f64,
    pub criterion: ThresholdCriterion,
    pub achieved: Option<f64>,
}

/// Evaluate the criterion at every candidate threshold (the distinct scores
/// plus a +inf sentinel) and return the maximizer; ties go to the smallest
/// threshold. Candidates where the criterion is undefined are skipped.
pub fn optimal_threshold(
    scores: &[f64],
    labels: &[u8],
    criterion: ThresholdCriterion,
) -> Result<ThresholdChoice> {
    let p = labels.iter().filter(|&&y| y == 1).count();
    if p == 0 || p == labels.len() {
        return Err(Error::DegenerateLabels);
    }

    if let ThresholdCriterion::Fixed(v) = criterion {
        return Ok(ThresholdChoice {
            threshold: v,
            criterion,
            achieved: None,
        });
    }

    let mut candidates: Vec<f64> = scores.to_vec();
    candidates.sort_by(|a, b| b.partial_cmp(a).expect("finite scores"));
    candidates.dedup();
    candidates.insert(0, f64::INFINITY);

    let mut best: Option<(f64, f64)> = None; // (value, threshold)
    for &threshold in &candidates {
        let counts = confusion_at(scores, labels, threshold)?;
        let value = match criterion {
            ThresholdCriterion::MaxF1 => match metrics_from_counts(&counts)?.f1 {
                Some(f1) => f1,
                None => continue,
            },
            ThresholdCriterion::MaxYouden => {
                let tpr = counts.tp as f64 / counts.positives() as f64;
                let fpr = counts.fp as f64 / counts.negatives() as f64;
                tpr - fpr
            }
            ThresholdCriterion::Fixed(_) => unreachable!(),
        };
        let replace = match best {
            None => true,
            Some((bv, bt)) => value > bv || (value == bv && threshold < bt),
        };
        if replace {
            best = Some((value, threshold));
        }
    }
    let (achieved, threshold) = best.ok_or(Error::EmptyEvaluation)?;
    Ok(ThresholdChoice {
        threshold,
        criterion,
        achieved: Some(achieved),
    })
}
