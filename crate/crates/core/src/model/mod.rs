//! The six classifier families behind one scoring interface.
//!
//! Training is a pure function of (data, hyperparameters, seed). Where work
//! is parallelized (across forest trees, across candidate split features),
//! results are reduced in a fixed deterministic order, so the fitted model is
//! independent of the worker count.

pub mod bayes;
pub mod forest;
pub mod gbt;
pub mod logistic;
pub mod mlp;
pub mod persist;
pub mod tree;

use crate::data::{Features, LabeledMatrix};
use crate::error::{Error, Result};

pub use bayes::{BayesHyper, BayesParams, FeatureModel};
pub use forest::{ForestHyper, ForestParams};
pub use gbt::{GbtHyper, GbtParams};
pub use logistic::{LogisticHyper, LogisticParams};
pub use mlp::{MlpHyper, MlpParams};
pub use tree::{TreeHyper, TreeNode, TreeParams};

/// Model family tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    Lr,
    Dt,
    Rf,
    Gbt,
    Nb,
    Nn,
}

impl ModelKind {
    pub fn all() -> [ModelKind; 6] {
        [
            ModelKind::Lr,
            ModelKind::Dt,
            ModelKind::Rf,
            ModelKind::Gbt,
            ModelKind::Nb,
            ModelKind::Nn,
        ]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Lr => "lr",
            ModelKind::Dt => "dt",
            ModelKind::Rf => "rf",
            ModelKind::Gbt => "gbt",
            ModelKind::Nb => "nb",
            ModelKind::Nn => "nn",
        }
    }

    /// Long display name for reports.
    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Lr => "Logistic Regression",
            ModelKind::Dt => "Decision Tree",
            ModelKind::Rf => "Random Forest",
            ModelKind::Gbt => "GBT",
            ModelKind::Nb => "Naive Bayes",
            ModelKind::Nn => "Neural Network",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lr" => Ok(ModelKind::Lr),
            "dt" => Ok(ModelKind::Dt),
            "rf" => Ok(ModelKind::Rf),
            "gbt" => Ok(ModelKind::Gbt),
            "nb" => Ok(ModelKind::Nb),
            "nn" => Ok(ModelKind::Nn),
            other => Err(Error::config(
                "model",
                format!("unknown model kind `{other}` (expected lr, dt, rf, gbt, nb, or nn)"),
            )),
        }
    }
}

/// What the emitted scores mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreSemantics {
    /// Scores lie in [0, 1].
    Probability,
    /// Unbounded additive margins (the boosted ensemble's raw mode).
    Margin,
}

/// Hyperparameters for every family. Each field has conventional small-data
/// defaults and is overridable from the experiment config.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Hyperparams {
    pub logistic: LogisticHyper,
    pub tree: TreeHyper,
    pub forest: ForestHyper,
    pub gbt: GbtHyper,
    pub bayes: BayesHyper,
    pub mlp: MlpHyper,
}

/// A fitted classifier exposing one real-valued score per row.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreModel {
    Logistic(LogisticParams),
    Tree(TreeParams),
    Forest(ForestParams),
    Boosted(GbtParams),
    Bayes(BayesParams),
    Mlp(MlpParams),
}

impl ScoreModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ScoreModel::Logistic(_) => ModelKind::Lr,
            ScoreModel::Tree(_) => ModelKind::Dt,
            ScoreModel::Forest(_) => ModelKind::Rf,
            ScoreModel::Boosted(_) => ModelKind::Gbt,
            ScoreModel::Bayes(_) => ModelKind::Nb,
            ScoreModel::Mlp(_) => ModelKind::Nn,
        }
    }

    pub fn semantics(&self) -> ScoreSemantics {
        match self {
            ScoreModel::Boosted(p) if p.raw_margin => ScoreSemantics::Margin,
            _ => ScoreSemantics::Probability,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            ScoreModel::Logistic(p) => p.weights.len(),
            ScoreModel::Tree(p) => p.n_features,
            ScoreModel::Forest(p) => p.n_features,
            ScoreModel::Boosted(p) => p.n_features,
            ScoreModel::Bayes(p) => p.features.len(),
            ScoreModel::Mlp(p) => p.n_features,
        }
    }

    /// Score every row. Pure and reentrant; the output order is the row
    /// order.
    pub fn predict_scores(&self, features: &Features) -> Result<Vec<f64>> {
        if features.n_cols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                actual: features.n_cols(),
            });
        }
        Ok(match self {
            ScoreModel::Logistic(p) => p.score_rows(features),
            ScoreModel::Tree(p) => p.score_rows(features),
            ScoreModel::Forest(p) => p.score_rows(features),
            ScoreModel::Boosted(p) => p.score_rows(features),
            ScoreModel::Bayes(p) => p.score_rows(features),
            ScoreModel::Mlp(p) => p.score_rows(features),
        })
    }

    /// Raw additive margins of the boosted ensemble, for diagnostics. `None`
    /// for every other family.
    pub fn margin_scores(&self, features: &Features) -> Option<Vec<f64>> {
        match self {
            ScoreModel::Boosted(p) if features.n_cols() == p.n_features => {
                Some(p.margin_rows(features))
            }
            _ => None,
        }
    }
}

/// Train one model family on `train` with the given hyperparameters.
pub fn train(kind: ModelKind, train: &LabeledMatrix, hp: &Hyperparams) -> Result<ScoreModel> {
    match kind {
        ModelKind::Lr => logistic::train_logistic(train, &hp.logistic),
        ModelKind::Dt => tree::train_tree(train, &hp.tree),
        ModelKind::Rf => forest::train_forest(train, &hp.forest),
        ModelKind::Gbt => gbt::train_gbt(train, &hp.gbt),
        ModelKind::Nb => bayes::train_naive_bayes(train, &hp.bayes),
        ModelKind::Nn => mlp::train_mlp(train, &hp.mlp),
    }
}

/// Numerically stable logistic sigmoid.
#[inline]
pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Stable softplus ln(1 + e^z), used by the log-loss.
#[inline]
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean binary log-loss of margins `z` against labels.
pub(crate) fn mean_log_loss(margins: &[f64], labels: &[u8]) -> f64 {
    let n = margins.len() as f64;
    margins
        .iter()
        .zip(labels)
        .map(|(&z, &y)| softplus(z) - f64::from(y) * z)
        .sum::<f64>()
        / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_endpoints() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(40.0) > 1.0 - 1e-12);
        assert!(sigmoid(-40.0) < 1e-12);
        assert!(sigmoid(-800.0) >= 0.0);
        assert!(sigmoid(800.0) <= 1.0);
    }

    #[test]
    fn log_loss_at_zero_margin_is_ln2() {
        let loss = mean_log_loss(&[0.0, 0.0, 0.0], &[1, 0, 1]);
        assert!((loss - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn kind_strings_round_trip() {
        for kind in ModelKind::all() {
            let parsed: ModelKind = kind.as_str().parse().unwrap();
            assert_eq!(parsed, kind);
        }
        assert!("svm".parse::<ModelKind>().is_err());
    }
}
