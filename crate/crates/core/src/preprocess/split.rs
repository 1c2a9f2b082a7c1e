//! Deterministic train/test partitioning, optionally stratified by class.

use crate::data::LabeledMatrix;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Split parameters. The seed fully determines the partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, stratified: bool, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::Split(format!(
                "train_fraction {train_fraction} must lie in (0, 1)"
            )));
        }
        Ok(SplitSpec {
            train_fraction,
            stratified,
            seed,
        })
    }
}

/// Round half away from zero; "residual" half rows land in train.
fn train_count(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64) + 0.5).floor() as usize
}

/// Compute the (train, test) row-index partition for the given labels.
///
/// Stratified mode shuffles and splits each class independently at
/// `train_fraction`, rounding to nearest per class. Output indices are in
/// ascending original order, so the partition is independent of shuffle
/// internals beyond membership.
pub fn split_indices(labels: &[u8], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = labels.len();
    if n < 2 {
        return Err(Error::Split(format!("cannot split {n} rows")));
    }
    let mut is_train = vec![false; n];
    let mut rng = SplitMix64::new(spec.seed);

    if spec.stratified {
        for class in [0u8, 1u8] {
            let mut class_rows: Vec<usize> =
                (0..n).filter(|&i| labels[i] == class).collect();
            if class_rows.len() < 2 {
                return Err(Error::Split(format!(
                    "stratified split requires at least 2 rows of class {class}, found {}",
                    class_rows.len()
                )));
            }
            rng.shuffle(&mut class_rows);
            let take = train_count(spec.train_fraction, class_rows.len());
            for &i in &class_rows[..take] {
                is_train[i] = true;
            }
        }
    } else {
        let mut rows: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut rows);
        let take = train_count(spec.train_fraction, n);
        for &i in &rows[..take] {
            is_train[i] = true;
        }
    }

    let train: Vec<usize> = (0..n).filter(|&i| is_train[i]).collect();
    let test: Vec<usize> = (0..n).filter(|&i| !is_train[i]).collect();
    if train.is_empty() || test.is_empty() {
        return Err(Error::Split(format!(
            "train_fraction {} leaves an empty partition for n={n}",
            spec.train_fraction
        )));
    }
    Ok((train, test))
}

/// Partition a labeled matrix into train and test sets.
pub fn split(m: &LabeledMatrix, spec: &SplitSpec) -> Result<(LabeledMatrix, LabeledMatrix)> {
    let (train_idx, test_idx) = split_indices(&m.labels, spec)?;
    Ok((m.select_rows(&train_idx), m.select_rows(&test_idx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Features;

    fn matrix(labels: Vec<u8>) -> LabeledMatrix {
        let n = labels.len();
        let data: Vec<f64> = (0..n).map(|i| i as f64).collect();
        LabeledMatrix::new(Features::new(data, n, 1).unwrap(), labels, vec!["x".into()]).unwrap()
    }

    #[test]
    fn stratified_exact_fractions() {
        let m = matrix(vec![1, 1, 1, 1, 1, 0, 0, 0, 0, 0]);
        let spec = SplitSpec::new(0.8, true, 41).unwrap();
        let (train, test) = split(&m, &spec).unwrap();
        assert_eq!(train.n_rows(), 8);
        assert_eq!(test.n_rows(), 2);
        assert_eq!(train.positives(), 4);
        assert_eq!(test.positives(), 1);
    }

    #[test]
    fn deterministic_for_seed() {
        let m = matrix((0..100).map(|i| (i % 3 == 0) as u8).collect());
        let spec = SplitSpec::new(0.7, true, 99).unwrap();
        let (a_train, a_test) = split(&m, &spec).unwrap();
        let (b_train, b_test) = split(&m, &spec).unwrap();
        assert_eq!(a_train, b_train);
        assert_eq!(a_test, b_test);
        let other = SplitSpec::new(0.7, true, 100).unwrap();
        let (c_train, _) = split(&m, &other).unwrap();
        assert_ne!(a_train, c_train);
    }

    #[test]
    fn partition_is_exact_and_disjoint() {
        let labels: Vec<u8> = (0..57).map(|i| (i % 4 == 0) as u8).collect();
        let spec = SplitSpec::new(0.65, true, 3).unwrap();
        let (train_idx, test_idx) = split_indices(&labels, &spec).unwrap();
        let mut all: Vec<usize> = train_idx.iter().chain(test_idx.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..57).collect::<Vec<_>>());
    }

    #[test]
    fn thyroid_sized_class_counts() {
        // 2,718 rows with 268 positives at 70/30: test keeps 80 positives.
        let mut labels = vec![1u8; 268];
        labels.extend(vec![0u8; 2450]);
        let spec = SplitSpec::new(0.7, true, 5).unwrap();
        let (train_idx, test_idx) = split_indices(&labels, &spec).unwrap();
        let test_pos = test_idx.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(test_pos, 80);
        let train_pos = train_idx.iter().filter(|&&i| labels[i] == 1).count();
        assert_eq!(train_pos, 188);
    }

    #[test]
    fn class_with_one_row_rejected() {
        let m = matrix(vec![1, 0, 0, 0]);
        let spec = SplitSpec::new(0.5, true, 1).unwrap();
        assert!(matches!(split(&m, &spec), Err(Error::Split(_))));
    }

    #[test]
    fn unstratified_split_counts() {
        let m = matrix(vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1]);
        let spec = SplitSpec::new(0.8, false, 17).unwrap();
        let (train, test) = split(&m, &spec).unwrap();
        assert_eq!(train.n_rows(), 8);
        assert_eq!(test.n_rows(), 2);
    }

    #[test]
    fn invalid_fraction_rejected() {
        assert!(SplitSpec::new(0.0, true, 0).is_err());
        assert!(SplitSpec::new(1.0, true, 0).is_err());
    }
}
