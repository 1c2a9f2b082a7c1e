//! The experiment config file: a flat, line-oriented `key = value` format
//! with repeated `model =` blocks.
//!
//! ```text
//! # lines starting with # are comments
//! disease = heart
//! source = synth
//! synth.rows = 5000
//! synth.signal = 1.0
//! seed = 42
//! out = runs/heart
//! model = rf
//! model.n_trees = 200
//! model = gbt
//! ```
//!
//! Keys before the first `model =` line configure the experiment; an
//! unadorned `model = <kind>` opens a block, and subsequent `model.<key>`
//! lines override that model's hyperparameters. Without any `model =` lines
//! the disease preset's full model list is used.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::eval::ThresholdCriterion;
use crate::ingest::{builtin_schema, default_positive_rate, DiseaseId};
use crate::model::{Hyperparams, ModelKind};
use crate::pipeline::{DataSource, ModelSpec, PipelineConfig};
use crate::preprocess::{ImputeRule, PlausibilityRule};

fn bad(field: &str, message: impl Into<String>) -> Error {
    Error::config(field, message)
}

fn parse_bool(field: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(bad(field, format!("expected true or false, got `{other}`"))),
    }
}

fn parse_f64(field: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| bad(field, format!("expected a number, got `{value}`")))
}

fn parse_usize(field: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| bad(field, format!("expected a nonnegative integer, got `{value}`")))
}

fn parse_u64(field: &str, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| bad(field, format!("expected a nonnegative integer, got `{value}`")))
}

fn apply_model_override(spec: &mut ModelSpec, key: &str, value: &str) -> Result<()> {
    let field = format!("model.{}.{key}", spec.kind.as_str());
    let hp = &mut spec.hyper;
    match (spec.kind, key) {
        (ModelKind::Lr, "learning_rate") => hp.logistic.learning_rate = parse_f64(&field, value)?,
        (ModelKind::Lr, "max_iters") => hp.logistic.max_iters = parse_usize(&field, value)?,
        (ModelKind::Lr, "tolerance") => hp.logistic.tolerance = parse_f64(&field, value)?,
        (ModelKind::Dt, "max_depth") => hp.tree.max_depth = parse_usize(&field, value)?,
        (ModelKind::Dt, "min_samples_leaf") => {
            hp.tree.min_samples_leaf = parse_usize(&field, value)?
        }
        (ModelKind::Rf, "n_trees") => hp.forest.n_trees = parse_usize(&field, value)?,
        (ModelKind::Rf, "m_try") => hp.forest.m_try = Some(parse_usize(&field, value)?),
        (ModelKind::Rf, "max_depth") => hp.forest.max_depth = parse_usize(&field, value)?,
        (ModelKind::Rf, "min_samples_leaf") => {
            hp.forest.min_samples_leaf = parse_usize(&field, value)?
        }
        (ModelKind::Rf, "bootstrap") => hp.forest.bootstrap = parse_bool(&field, value)?,
        (ModelKind::Gbt, "n_trees" | "n_rounds") => {
            hp.gbt.n_rounds = parse_usize(&field, value)?
        }
        (ModelKind::Gbt, "learning_rate") => hp.gbt.learning_rate = parse_f64(&field, value)?,
        (ModelKind::Gbt, "max_depth") => hp.gbt.max_depth = parse_usize(&field, value)?,
        (ModelKind::Gbt, "min_samples_leaf") => {
            hp.gbt.min_samples_leaf = parse_usize(&field, value)?
        }
        (ModelKind::Nb, "alpha") => hp.bayes.alpha = parse_f64(&field, value)?,
        (ModelKind::Nb, "variance_floor") => hp.bayes.variance_floor = parse_f64(&field, value)?,
        (ModelKind::Nn, "hidden") => hp.mlp.hidden = parse_usize(&field, value)?,
        (ModelKind::Nn, "learning_rate") => hp.mlp.learning_rate = parse_f64(&field, value)?,
        (ModelKind::Nn, "epochs") => hp.mlp.epochs = parse_usize(&field, value)?,
        (ModelKind::Nn, "batch_size") => hp.mlp.batch_size = parse_usize(&field, value)?,
        _ => {
            return Err(bad(
                &field,
                format!("unknown hyperparameter `{key}` for model `{}`", spec.kind.as_str()),
            ))
        }
    }
    Ok(())
}

/// Parse config text into a [`PipelineConfig`]. The disease preset supplies
/// every unspecified field.
pub fn parse_config_text(text: &str, config_dir: &Path) -> Result<PipelineConfig> {
    // First pass: find the disease so the preset can seed the defaults.
    let mut disease: Option<DiseaseId> = None;
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad(
                &format!("line {}", line_no + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key == "disease" {
            disease = Some(value.parse()?);
        }
        entries.push((line_no + 1, key, value));
    }
    let disease = disease.ok_or_else(|| bad("disease", "missing required key"))?;

    let mut config = PipelineConfig::preset(
        disease,
        PipelineConfig::synth_source(disease, 2000, 1.0),
        PathBuf::from("runs").join(disease.as_str()),
        0,
    );

    let schema = builtin_schema(disease);
    let mut source_kind: Option<String> = None;
    let mut file_path: Option<PathBuf> = None;
    let mut synth_rows = 2000usize;
    let mut synth_signal = 1.0f64;
    let mut synth_rate = default_positive_rate(disease);
    let mut models: Vec<ModelSpec> = Vec::new();
    let mut in_models = false;

    for (line_no, key, value) in entries {
        match key.as_str() {
            "model" => {
                let kind: ModelKind = value.parse()?;
                if models.iter().any(|m| m.kind == kind) {
                    return Err(bad(
                        "model",
                        format!("model `{value}` listed twice (line {line_no})"),
                    ));
                }
                models.push(ModelSpec {
                    kind,
                    hyper: Hyperparams::default(),
                });
                in_models = true;
                continue;
            }
            _ if key.starts_with("model.") => {
                if !in_models {
                    return Err(bad(
                        &key,
                        format!("`{key}` appears before any `model =` line (line {line_no})"),
                    ));
                }
                let spec = models.last_mut().unwrap();
                apply_model_override(spec, &key["model.".len()..], &value)?;
                continue;
            }
            _ => {}
        }
        if in_models {
            return Err(bad(
                &key,
                format!("experiment key `{key}` must appear before the model blocks (line {line_no})"),
            ));
        }
        match key.as_str() {
            "disease" => {}
            "experiment" => config.experiment = value,
            "source" => match value.as_str() {
                "synth" | "file" => source_kind = Some(value),
                other => return Err(bad("source", format!("expected synth or file, got `{other}`"))),
            },
            "file" => {
                let p = PathBuf::from(&value);
                file_path = Some(if p.is_absolute() {
                    p
                } else {
                    config_dir.join(p)
                });
            }
            "synth.rows" => synth_rows = parse_usize("synth.rows", &value)?,
            "synth.signal" => synth_signal = parse_f64("synth.signal", &value)?,
            "synth.positive_rate" => synth_rate = parse_f64("synth.positive_rate", &value)?,
            "seed" => config.seed = parse_u64("seed", &value)?,
            "out" => {
                let p = PathBuf::from(&value);
                config.out_dir = if p.is_absolute() { p } else { config_dir.join(p) };
            }
            "split.train_fraction" => {
                config.train_fraction = parse_f64("split.train_fraction", &value)?
            }
            "split.stratified" => config.stratified = parse_bool("split.stratified", &value)?,
            "threshold.criterion" => config.threshold = ThresholdCriterion::parse(&value)?,
            "fit_on_train_only" => {
                config.fit_on_train_only = parse_bool("fit_on_train_only", &value)?
            }
            "dedupe" => config.plan.dedupe = parse_bool("dedupe", &value)?,
            "drop_null_columns" => {
                config.plan.drop_null_columns = parse_bool("drop_null_columns", &value)?
            }
            "impute.numeric" => {
                let rule: ImputeRule = value.parse()?;
                let cats: Vec<(String, ImputeRule)> = config
                    .plan
                    .impute
                    .rules
                    .iter()
                    .filter(|(name, _)| {
                        schema
                            .index_of(name)
                            .map(|i| schema.column(i).kind == crate::data::ColumnKind::Categorical)
                            .unwrap_or(false)
                    })
                    .map(|(n, r)| (n.clone(), *r))
                    .collect();
                config.plan.impute =
                    crate::preprocess::ImputePolicy::bulk(&schema, rule, ImputeRule::None);
                for (name, rule) in cats {
                    config.plan.impute.rules.insert(name, rule);
                }
            }
            "impute.categorical" => {
                let rule: ImputeRule = value.parse()?;
                for (i, col) in schema.columns().iter().enumerate() {
                    if col.kind == crate::data::ColumnKind::Categorical
                        && i != schema.target_index()
                    {
                        if rule == ImputeRule::None {
                            config.plan.impute.rules.remove(&col.name);
                        } else {
                            config.plan.impute.rules.insert(col.name.clone(), rule);
                        }
                    }
                }
            }
            _ if key.starts_with("impute.") => {
                let column = key["impute.".len()..].to_string();
                schema
                    .index_of(&column)
                    .map_err(|_| bad(&key, format!("unknown column `{column}`")))?;
                let rule: ImputeRule = value.parse()?;
                if rule == ImputeRule::None {
                    config.plan.impute.rules.remove(&column);
                } else {
                    config.plan.impute.rules.insert(column, rule);
                }
            }
            "encode" => {
                config.plan.encode =
                    Some(value.split(',').map(|s| s.trim().to_string()).collect())
            }
            "binarize.positive" => {
                config.plan.binarize_positive = value
                    .split('|')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect::<BTreeSet<_>>();
            }
            _ if key.starts_with("validate.") => {
                let column = key["validate.".len()..].to_string();
                let Some((lo, hi)) = value.split_once("..") else {
                    return Err(bad(&key, format!("expected `min..max`, got `{value}`")));
                };
                config.plan.plausibility.push(PlausibilityRule {
                    column,
                    min: parse_f64(&key, lo.trim())?,
                    max: parse_f64(&key, hi.trim())?,
                });
            }
            "features" => {
                config.feature_subset =
                    Some(value.split(',').map(|s| s.trim().to_string()).collect())
            }
            other => {
                return Err(bad(
                    other,
                    format!("unknown config key (line {line_no})"),
                ))
            }
        }
    }

    config.source = match (source_kind.as_deref(), file_path) {
        (Some("file"), Some(path)) => DataSource::File(path),
        (Some("file"), None) => {
            return Err(bad("file", "source = file requires a `file =` path"))
        }
        // A bare `file =` line implies a file source.
        (None, Some(path)) => DataSource::File(path),
        _ => DataSource::Synth {
            n_rows: synth_rows,
            signal_strength: synth_signal,
            positive_rate: synth_rate,
        },
    };
    if !models.is_empty() {
        config.models = models;
    }
    config.validate()?;
    Ok(config)
}

/// Read and parse a config file. Relative `file =` and `out =` paths resolve
/// against the config file's directory.
pub fn read_config_file(path: &Path) -> Result<PipelineConfig> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config_text(&text, dir)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PipelineConfig> {
        parse_config_text(text, Path::new("."))
    }

    #[test]
    fn minimal_config_uses_preset() {
        let config = parse("disease = thyroid\n").unwrap();
        assert_eq!(config.disease, DiseaseId::Thyroid);
        assert_eq!(config.train_fraction, 0.7);
        assert_eq!(config.models.len(), 6);
        assert!(!config.plan.binarize_positive.is_empty());
    }

    #[test]
    fn model_blocks_override_hyperparameters() {
        let config = parse(
            "disease = heart\nmodel = rf\nmodel.n_trees = 7\nmodel = gbt\nmodel.learning_rate = 0.2\n",
        )
        .unwrap();
        assert_eq!(config.models.len(), 2);
        assert_eq!(config.models[0].hyper.forest.n_trees, 7);
        assert_eq!(config.models[1].hyper.gbt.learning_rate, 0.2);
    }

    #[test]
    fn unknown_model_key_has_field_path() {
        let err = parse("disease = heart\nmodel = rf\nmodel.wibble = 1\n").unwrap_err();
        match err {
            Error::Config { field, .. } => assert_eq!(field, "model.rf.wibble"),
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn mode_imputation_on_numeric_column_rejected() {
        let err = parse("disease = heart\nimpute.chol = mode\n").unwrap_err();
        match err {
            Error::Config { field, .. } => assert_eq!(field, "impute.chol"),
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(parse("disease = heart\nwibble = 3\n").is_err());
    }

    #[test]
    fn missing_disease_rejected() {
        assert!(parse("seed = 3\n").is_err());
    }

    #[test]
    fn synth_source_fields() {
        let config = parse(
            "disease = ckd\nsource = synth\nsynth.rows = 123\nsynth.signal = 0.25\nseed = 9\n",
        )
        .unwrap();
        match config.source {
            DataSource::Synth {
                n_rows,
                signal_strength,
                ..
            } => {
                assert_eq!(n_rows, 123);
                assert_eq!(signal_strength, 0.25);
            }
            _ => panic!("expected synth source"),
        }
        assert_eq!(config.seed, 9);
    }

    #[test]
    fn file_source_resolves_relative_to_config_dir() {
        let config =
            parse_config_text("disease = heart\nsource = file\nfile = data/h.csv\n", Path::new("/tmp/cfg"))
                .unwrap();
        assert_eq!(
            config.source,
            DataSource::File(PathBuf::from("/tmp/cfg/data/h.csv"))
        );
    }

    #[test]
    fn validate_rules_parse() {
        let config = parse("disease = thyroid\nvalidate.TSH = 0..600\n").unwrap();
        assert!(config
            .plan
            .plausibility
            .iter()
            .any(|r| r.column == "TSH" && r.max == 600.0));
    }

    #[test]
    fn threshold_criterion_parses() {
        let config = parse("disease = heart\nthreshold.criterion = fixed:0.5\n").unwrap();
        assert_eq!(config.threshold, ThresholdCriterion::Fixed(0.5));
    }
}
