//! Shared test oracles, independent of the implementation paths they check.

#![allow(dead_code)]

use tabmed_core::data::{Features, LabeledMatrix};
use tabmed_core::rng::SplitMix64;

/// Mann-Whitney statistic by brute-force pair counting: the fraction of
/// (positive, negative) pairs ordered correctly, ties half-credited.
pub fn mann_whitney_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let pos: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 1)
        .map(|(&s, _)| s)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 0)
        .map(|(&s, _)| s)
        .collect();
    let mut credit = 0.0;
    for &p in &pos {
        for &n in &neg {
            if p > n {
                credit += 1.0;
            } else if p == n {
                credit += 0.5;
            }
        }
    }
    credit / (pos.len() as f64 * neg.len() as f64)
}

/// Brute-force maximum Gini gain over every (feature, midpoint) candidate,
/// recomputed from scratch for each candidate. `None` when no candidate
/// satisfies the leaf minimum.
pub fn brute_force_max_gini_gain(
    features: &Features,
    labels: &[u8],
    min_leaf: usize,
) -> Option<f64> {
    let n = features.n_rows();
    let pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let gini = |p: f64, t: f64| -> f64 {
        if t == 0.0 {
            0.0
        } else {
            2.0 * (p / t) * (1.0 - p / t)
        }
    };
    let parent = gini(pos, n as f64);
    if parent == 0.0 {
        return None;
    }
    let mut best: Option<f64> = None;
    for feature in 0..features.n_cols() {
        let mut values: Vec<f64> = (0..n).map(|r| features.get(r, feature)).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let mut left_n = 0.0;
            let mut left_pos = 0.0;
            for (r, &label) in labels.iter().enumerate() {
                if features.get(r, feature) < threshold {
                    left_n += 1.0;
                    if label == 1 {
                        left_pos += 1.0;
                    }
                }
            }
            let right_n = n as f64 - left_n;
            let right_pos = pos - left_pos;
            if (left_n as usize) < min_leaf || (right_n as usize) < min_leaf {
                continue;
            }
            let gain = parent
                - (left_n / n as f64) * gini(left_pos, left_n)
                - (right_n / n as f64) * gini(right_pos, right_n);
            if gain >= 0.0 && best.is_none_or(|b| gain > b) {
                best = Some(gain);
            }
        }
    }
    best
}

/// Weighted Gini gain of one specific split, brute-force route.
pub fn gini_gain_of_split(
    features: &Features,
    labels: &[u8],
    feature: usize,
    threshold: f64,
) -> f64 {
    let n = features.n_rows() as f64;
    let pos = labels.iter().filter(|&&y| y == 1).count() as f64;
    let gini = |p: f64, t: f64| -> f64 {
        if t == 0.0 {
            0.0
        } else {
            2.0 * (p / t) * (1.0 - p / t)
        }
    };
    let mut left_n = 0.0;
    let mut left_pos = 0.0;
    for (r, &label) in labels.iter().enumerate() {
        if features.get(r, feature) < threshold {
            left_n += 1.0;
            if label == 1 {
                left_pos += 1.0;
            }
        }
    }
    let right_n = n - left_n;
    let right_pos = pos - left_pos;
    gini(pos, n) - (left_n / n) * gini(left_pos, left_n) - (right_n / n) * gini(right_pos, right_n)
}

/// Random labeled matrix: standard-normal features, labels by a noisy linear
/// rule so both classes are typically present.
pub fn random_instance(n: usize, d: usize, seed: u64) -> LabeledMatrix {
    let mut rng = SplitMix64::new(seed);
    loop {
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
        let pos: usize = labels.iter().map(|&l| usize::from(l)).sum();
        if pos > 0 && pos < n {
            return LabeledMatrix::new(
                Features::new(data, n, d).unwrap(),
                labels,
                (0..d).map(|i| format!("f{i}")).collect(),
            )
            .unwrap();
        }
    }
}

/// Scores drawn from a coarse grid (deliberate ties) plus labels with both
/// classes present.
pub fn tied_scores_instance(max_n: usize, seed: u64) -> (Vec<f64>, Vec<u8>) {
    let mut rng = SplitMix64::new(seed);
    let n = 2 + rng.next_below(max_n - 1);
    loop {
        let scores: Vec<f64> = (0..n).map(|_| rng.next_below(13) as f64 / 12.0).collect();
        let labels: Vec<u8> = (0..n).map(|_| u8::from(rng.next_f64() < 0.5)).collect();
        let pos: usize = labels.iter().map(|&l| usize::from(l)).sum();
        if pos > 0 && pos < n {
            return (scores, labels);
        }
    }
}

/// Max elementwise relative error between an analytic gradient and its
/// central finite-difference estimate, with a floor on the denominator so
/// near-zero components are compared absolutely.
pub fn max_relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(&a, &b)| (a - b).abs() / a.abs().max(b.abs()).max(1e-3))
        .fold(0.0, f64::max)
}
