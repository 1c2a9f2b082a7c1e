//! Dense numeric matrices for model input.

use crate::error::{Error, Result};

/// A dense row-major feature matrix. All entries are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Features {
    data: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
}

impl Features {
    pub fn new(data: Vec<f64>, n_rows: usize, n_cols: usize) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::Schema(format!(
                "matrix data length {} != {n_rows} x {n_cols}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::Schema(format!("non-finite matrix entry {v}")));
        }
        Ok(Features {
            data,
            n_rows,
            n_cols,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::Schema("ragged feature rows".into()));
            }
            data.extend_from_slice(row);
        }
        Features::new(data, n_rows, n_cols)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n_cols + col]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    /// New matrix containing the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Features {
        let mut data = Vec::with_capacity(indices.len() * self.n_cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Features {
            data,
            n_rows: indices.len(),
            n_cols: self.n_cols,
        }
    }
}

/// A feature matrix paired with strictly binary labels and feature names.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub features: Features,
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
}

impl LabeledMatrix {
    pub fn new(features: Features, labels: Vec<u8>, feature_names: Vec<String>) -> Result<Self> {
        if labels.len() != features.n_rows() {
            return Err(Error::Schema(format!(
                "{} labels for {} rows",
                labels.len(),
                features.n_rows()
            )));
        }
        if feature_names.len() != features.n_cols() {
            return Err(Error::Schema(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                features.n_cols()
            )));
        }
        if let Some(l) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Schema(format!("non-binary label {l}")));
        }
        Ok(LabeledMatrix {
            features,
            labels,
            feature_names,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.features.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.features.n_cols()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn select_rows(&self, indices: &[usize]) -> LabeledMatrix {
        LabeledMatrix {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}
