//! Declarative experiment pipelines: configuration, the four disease
//! presets, the train/evaluate runner, and the persisted pipeline bundle
//! used by the prediction phase.

mod bundle;
mod config;
mod run;

pub use bundle::{load_bundle, save_bundle, PipelineBundle, PredictOutput};
pub use config::{parse_config_text, read_config_file};
pub use run::{load_results, parse_roc_csv, roc_csv, run_experiment, RunArtifacts};

use std::collections::BTreeSet;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::ingest::{builtin_schema, default_positive_rate, thyroid_positive_labels, DiseaseId};
use crate::model::{Hyperparams, ModelKind};
use crate::preprocess::{ImputePolicy, ImputeRule, PlausibilityRule};
use crate::eval::ThresholdCriterion;

/// Where the experiment's rows come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    File(PathBuf),
    /// Synthetic rows; the generator seed derives from the master seed.
    Synth {
        n_rows: usize,
        signal_strength: f64,
        positive_rate: f64,
    },
}

/// The preprocessing step list. Steps run in the fixed order: dedupe,
/// drop-null-columns, impute (fit+apply), encode, binarize, validate,
/// assemble, split.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessPlan {
    pub dedupe: bool,
    pub drop_null_columns: bool,
    pub impute: ImputePolicy,
    /// Categorical columns to label-encode; `None` encodes every categorical
    /// feature column present after imputation.
    pub encode: Option<Vec<String>>,
    /// Tokens mapped to 1 when the target is categorical.
    pub binarize_positive: BTreeSet<String>,
    pub plausibility: Vec<PlausibilityRule>,
}

/// One model to train, with its full hyperparameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub hyper: Hyperparams,
}

/// A complete experiment description. Everything random flows from `seed`.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub experiment: String,
    pub disease: DiseaseId,
    pub source: DataSource,
    pub plan: PreprocessPlan,
    pub models: Vec<ModelSpec>,
    pub train_fraction: f64,
    pub stratified: bool,
    pub threshold: ThresholdCriterion,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Fit imputers/encoders on the train rows only instead of the full
    /// table (the default mirrors the upstream order of operations and its
    /// documented leakage).
    pub fit_on_train_only: bool,
    /// Restrict assembled features to this subset (pre-encoding names work).
    pub feature_subset: Option<Vec<String>>,
}

impl PipelineConfig {
    /// The built-in pipeline for a disease:
    ///
    /// - heart: zero-fill numerics, mode-fill categoricals, encode, 80/20
    ///   stratified split;
    /// - thyroid: mean/mode imputation, encode, binarize the diagnosis
    ///   label, age plausibility flags, 70/30 stratified split;
    /// - diabetes: dedupe, mean/mode imputation, encode, 80/20 split;
    /// - ckd: drop null columns, encode, 80/20 split.
    ///
    /// All six model families are trained by default.
    pub fn preset(disease: DiseaseId, source: DataSource, out_dir: PathBuf, seed: u64) -> Self {
        let schema = builtin_schema(disease);
        let (plan, train_fraction) = match disease {
            DiseaseId::Heart => (
                PreprocessPlan {
                    dedupe: false,
                    drop_null_columns: false,
                    impute: ImputePolicy::bulk(&schema, ImputeRule::Zero, ImputeRule::Mode),
                    encode: None,
                    binarize_positive: BTreeSet::new(),
                    plausibility: Vec::new(),
                },
                0.8,
            ),
            DiseaseId::Thyroid => (
                PreprocessPlan {
                    dedupe: false,
                    drop_null_columns: false,
                    impute: ImputePolicy::bulk(&schema, ImputeRule::Mean, ImputeRule::Mode),
                    encode: None,
                    binarize_positive: thyroid_positive_labels().into_iter().collect(),
                    plausibility: vec![PlausibilityRule {
                        column: "age".into(),
                        min: 0.0,
                        max: 120.0,
                    }],
                },
                0.7,
            ),
            DiseaseId::Diabetes => (
                PreprocessPlan {
                    dedupe: true,
                    drop_null_columns: false,
                    impute: ImputePolicy::bulk(&schema, ImputeRule::Mean, ImputeRule::Mode),
                    encode: None,
                    binarize_positive: BTreeSet::new(),
                    plausibility: Vec::new(),
                },
                0.8,
            ),
            DiseaseId::Ckd => (
                PreprocessPlan {
                    dedupe: false,
                    drop_null_columns: true,
                    impute: ImputePolicy::new(),
                    encode: None,
                    binarize_positive: BTreeSet::new(),
                    plausibility: Vec::new(),
                },
                0.8,
            ),
        };
        PipelineConfig {
            experiment: disease.as_str().to_string(),
            disease,
            source,
            plan,
            models: ModelKind::all()
                .iter()
                .map(|&kind| ModelSpec {
                    kind,
                    hyper: Hyperparams::default(),
                })
                .collect(),
            train_fraction,
            stratified: true,
            threshold: ThresholdCriterion::MaxF1,
            out_dir,
            seed,
            fit_on_train_only: false,
            feature_subset: None,
        }
    }

    /// Default synthetic source for a disease.
    pub fn synth_source(disease: DiseaseId, n_rows: usize, signal_strength: f64) -> DataSource {
        DataSource::Synth {
            n_rows,
            signal_strength,
            positive_rate: default_positive_rate(disease),
        }
    }

    /// Validate cross-field constraints that the parser cannot check alone.
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::config("model", "at least one model is required"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::config(
                "split.train_fraction",
                "must lie in (0, 1)",
            ));
        }
        let schema = builtin_schema(self.disease);
        self.plan.impute.check(&schema)?;
        for rule in &self.plan.plausibility {
            schema.index_of(&rule.column)?;
            if rule.min > rule.max {
                return Err(Error::config(
                    format!("validate.{}", rule.column),
                    "min exceeds max",
                ));
            }
        }
        if let DataSource::Synth {
            n_rows,
            signal_strength,
            positive_rate,
        } = &self.source
        {
            crate::ingest::SynthSpec::new(*n_rows, 0, *signal_strength, *positive_rate)?;
        }
        Ok(())
    }
}
