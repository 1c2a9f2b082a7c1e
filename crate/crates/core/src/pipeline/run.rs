//! The experiment runner: source -> preprocess -> split -> train & evaluate
//! every configured model -> write deterministic artifacts.
//!
//! Output layout under the configured directory:
//!
//! ```text
//! results.kv            full-precision results (re-render source)
//! report.txt            comparison table
//! report.csv            the same as CSV
//! roc.svg               all models' ROC curves
//! models/<kind>/bundle.tabmed   pipeline bundle (transforms + model + threshold)
//! models/<kind>/roc.csv         threshold,fpr,tpr points
//! models/<kind>/confusion.txt   2x2 grid
//! run.log               timestamps and warnings; the only non-deterministic file
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::data::{Cell, ColumnKind, LabeledMatrix, Table};
use crate::error::{Error, Result};
use crate::eval::{
    evaluate, ConfusionCounts, Evaluation, MetricBundle, RocCurve, RocPoint, ThresholdChoice,
    ThresholdCriterion,
};
use crate::ingest::{load_disease, synthesize, SynthSpec};
use crate::model::{train, ModelKind, ScoreModel};
use crate::pipeline::bundle::{save_bundle, PipelineBundle};
use crate::pipeline::{DataSource, PipelineConfig};
use crate::preprocess::{
    apply_encoder, apply_imputer, assemble_restricted, binarize_target, dedupe, drop_null_columns,
    fit_encoder, fit_imputer, split_indices, validate, EncoderMap, FittedImputer, SplitSpec,
    ValidationReport,
};
use crate::report::{render_comparison, render_confusion, ComparisonReport, ModelRow, TableFormat};
use crate::rng::derive_seed;

/// Everything a run produced, alongside the files written to `out_dir`.
#[derive(Debug)]
pub struct RunArtifacts {
    pub report: ComparisonReport,
    pub evaluations: Vec<(ModelKind, Evaluation)>,
    pub validation: ValidationReport,
    /// Unseen-category events per encoded column during the run.
    pub unseen_counts: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
}

fn provenance_string(config: &PipelineConfig) -> String {
    let source = match &config.source {
        DataSource::File(path) => format!("file:{}", path.display()),
        DataSource::Synth {
            n_rows,
            signal_strength,
            positive_rate,
        } => format!(
            "synth:{} rows={n_rows} signal={signal_strength} positive_rate={positive_rate}",
            config.disease
        ),
    };
    format!(
        "{source} seed={} split=train_fraction={},stratified={}",
        config.seed, config.train_fraction, config.stratified
    )
}

/// A categorical target whose observed tokens are all `0`/`1` — a
/// previously binarized or synthesized file — is coerced to numeric, so no
/// positive-label set is needed to load it.
fn normalize_binary_token_target(table: Table) -> Result<Table> {
    let target = table.schema().target_index();
    if table.schema().target().kind != ColumnKind::Categorical {
        return Ok(table);
    }
    let mut any_token = false;
    let all_binary = table.rows().iter().all(|row| match &row[target] {
        Cell::Token(t) => {
            any_token = true;
            t == "0" || t == "1"
        }
        _ => true,
    });
    if !any_token || !all_binary {
        return Ok(table);
    }
    let positives: std::collections::BTreeSet<String> = ["1".to_string()].into();
    binarize_target(&table, &positives)
}

/// Labels of the (binarized) target column, for partitioning before
/// transforms are fitted.
fn target_labels(table: &Table) -> Result<Vec<u8>> {
    let target = table.schema().target_index();
    let name = &table.schema().target().name;
    table
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| match &row[target] {
            Cell::Number(v) if *v == 0.0 => Ok(0u8),
            Cell::Number(v) if *v == 1.0 => Ok(1u8),
            Cell::Missing => Err(Error::Assembly {
                column: name.clone(),
                row: r,
                message: "missing target; enable drop_null_columns to drop such rows".into(),
            }),
            other => Err(Error::Assembly {
                column: name.clone(),
                row: r,
                message: format!("target cell {other:?} is not binary"),
            }),
        })
        .collect()
}

struct Prepared {
    train: LabeledMatrix,
    test: LabeledMatrix,
    imputer: FittedImputer,
    encoder: EncoderMap,
    validation: ValidationReport,
    unseen_counts: BTreeMap<String, usize>,
    input_schema: crate::data::Schema,
    /// Indices (in assembled feature order) of encoder-produced columns.
    categorical_feature_indices: Vec<usize>,
}

fn prepare(config: &PipelineConfig, warnings: &mut Vec<String>) -> Result<Prepared> {
    let mut table = match &config.source {
        DataSource::File(path) => {
            let parsed = load_disease(config.disease, path)?;
            for name in &parsed.ignored_columns {
                warnings.push(format!("ignored input column `{name}`"));
            }
            parsed.table
        }
        DataSource::Synth {
            n_rows,
            signal_strength,
            positive_rate,
        } => {
            let spec = SynthSpec::new(
                *n_rows,
                derive_seed(config.seed, "synth"),
                *signal_strength,
                *positive_rate,
            )?;
            synthesize(config.disease, &spec)?
        }
    };
    let input_schema = table.schema().clone();

    if config.plan.dedupe {
        let before = table.n_rows();
        table = dedupe(&table);
        if table.n_rows() < before {
            warnings.push(format!("dedupe removed {} rows", before - table.n_rows()));
        }
    }
    if config.plan.drop_null_columns {
        let outcome = drop_null_columns(&table)?;
        if !outcome.dropped_columns.is_empty() {
            warnings.push(format!(
                "dropped null columns: {}",
                outcome.dropped_columns.join(", ")
            ));
        }
        if outcome.dropped_rows > 0 {
            warnings.push(format!(
                "dropped {} rows with a missing target",
                outcome.dropped_rows
            ));
        }
        table = outcome.table;
    }
    table = normalize_binary_token_target(table)?;
    if table.schema().target().kind == ColumnKind::Categorical {
        if config.plan.binarize_positive.is_empty() {
            return Err(Error::config(
                "binarize.positive",
                "the target is categorical; a positive label set is required",
            ));
        }
        table = binarize_target(&table, &config.plan.binarize_positive)?;
    }

    // The partition is fixed before any fitting so the leakage-avoiding mode
    // can fit on train rows only; both modes then share the same split.
    let labels = target_labels(&table)?;
    let split_spec = SplitSpec::new(
        config.train_fraction,
        config.stratified,
        derive_seed(config.seed, "split"),
    )?;
    let (train_idx, test_idx) = split_indices(&labels, &split_spec)?;

    let fit_table = if config.fit_on_train_only {
        table.with_rows(train_idx.iter().map(|&i| table.rows()[i].clone()).collect())
    } else {
        table.clone()
    };

    let imputer = fit_imputer(&fit_table, &config.plan.impute)?;
    let table = apply_imputer(&table, &imputer)?;
    let fit_table = apply_imputer(&fit_table, &imputer)?;

    let encode_columns: Vec<String> = match &config.plan.encode {
        Some(names) => names.clone(),
        None => table
            .schema()
            .columns()
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                c.kind == ColumnKind::Categorical && *i != table.schema().target_index()
            })
            .map(|(_, c)| c.name.clone())
            .collect(),
    };
    let encoder = fit_encoder(&fit_table, &encode_columns)?;
    let encoded = apply_encoder(&table, &encoder)?;
    let unseen_counts = encoded.unseen_counts.clone();
    let table = encoded.table;

    let validation = validate(&table, &config.plan.plausibility);
    for (column, nulls) in &validation.null_counts {
        let covered = config.plan.impute.rules.contains_key(column);
        if covered && *nulls > 0 {
            return Err(Error::Schema(format!(
                "column `{column}` still has {nulls} missing cells after imputation"
            )));
        }
    }
    if !validation.implausible.is_empty() {
        warnings.push(format!(
            "{} implausible values flagged",
            validation.implausible.len()
        ));
    }

    let matrix = assemble_restricted(&table, config.feature_subset.as_deref())?;
    debug_assert_eq!(matrix.labels, labels);
    let train = matrix.select_rows(&train_idx);
    let test = matrix.select_rows(&test_idx);

    let categorical_feature_indices = encoder
        .columns
        .iter()
        .filter_map(|enc| {
            let renamed = format!("{}_index", enc.column);
            matrix.feature_names.iter().position(|n| *n == renamed)
        })
        .collect();

    Ok(Prepared {
        train,
        test,
        imputer,
        encoder,
        validation,
        unseen_counts,
        input_schema,
        categorical_feature_indices,
    })
}

fn fmt_opt(v: Option<f64>, none_word: &str) -> String {
    match v {
        Some(v) => format!("{v}"),
        None => none_word.to_string(),
    }
}

fn results_kv(
    config: &PipelineConfig,
    report: &ComparisonReport,
    evaluations: &[(ModelKind, Evaluation)],
    unseen: &BTreeMap<String, usize>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "experiment = {}", report.experiment);
    let _ = writeln!(out, "disease = {}", config.disease);
    let _ = writeln!(out, "provenance = {}", report.provenance);
    let first = &report.rows[0].counts;
    let _ = writeln!(out, "test_rows = {}", first.total());
    let _ = writeln!(out, "test_positives = {}", first.positives());
    let kinds: Vec<&str> = report.rows.iter().map(|r| r.kind.as_str()).collect();
    let _ = writeln!(out, "models = {}", kinds.join(","));
    let total_unseen: usize = unseen.values().sum();
    let _ = writeln!(out, "unseen_total = {total_unseen}");
    for (kind, ev) in evaluations {
        let k = kind.as_str();
        let m = &ev.metrics;
        let _ = writeln!(out, "{k}.auc = {}", m.auc);
        let _ = writeln!(out, "{k}.precision = {}", fmt_opt(m.precision, "undefined"));
        let _ = writeln!(out, "{k}.recall = {}", fmt_opt(m.recall, "undefined"));
        let _ = writeln!(out, "{k}.f1 = {}", fmt_opt(m.f1, "undefined"));
        let _ = writeln!(out, "{k}.accuracy = {}", m.accuracy);
        let _ = writeln!(out, "{k}.threshold = {}", ev.threshold.threshold);
        let _ = writeln!(out, "{k}.criterion = {}", ev.threshold.criterion.as_str());
        let _ = writeln!(out, "{k}.achieved = {}", fmt_opt(ev.threshold.achieved, "none"));
        let _ = writeln!(out, "{k}.tp = {}", ev.counts.tp);
        let _ = writeln!(out, "{k}.fp = {}", ev.counts.fp);
        let _ = writeln!(out, "{k}.fn = {}", ev.counts.fn_);
        let _ = writeln!(out, "{k}.tn = {}", ev.counts.tn);
    }
    out
}

/// `threshold,fpr,tpr` rows at full precision.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("threshold,fpr,tpr\n");
    for p in &curve.points {
        let _ = writeln!(out, "{},{},{}", p.threshold, p.fpr, p.tpr);
    }
    out
}

/// Parse a `roc.csv` written by [`roc_csv`].
pub fn parse_roc_csv(text: &str) -> Result<RocCurve> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            continue;
        }
        let mut parts = line.split(',');
        let mut field = |name: &str| -> Result<f64> {
            parts
                .next()
                .ok_or_else(|| Error::Parse {
                    line: (i + 1) as u64,
                    message: format!("missing {name}"),
                })?
                .parse::<f64>()
                .map_err(|_| Error::Parse {
                    line: (i + 1) as u64,
                    message: format!("bad {name}"),
                })
        };
        points.push(RocPoint {
            threshold: field("threshold")?,
            fpr: field("fpr")?,
            tpr: field("tpr")?,
        });
    }
    Ok(RocCurve { points })
}

/// Execute an experiment and write its artifact tree.
pub fn run_experiment(config: &PipelineConfig) -> Result<RunArtifacts> {
    config.validate()?;
    let mut warnings = Vec::new();
    let prepared = prepare(config, &mut warnings)?;

    // Train the configured models concurrently; results land in config order.
    let trained: Vec<(ModelKind, ScoreModel, Evaluation)> = config
        .models
        .par_iter()
        .map(|spec| {
            let mut hyper = spec.hyper.clone();
            hyper.forest.seed = derive_seed(config.seed, "train:rf");
            hyper.mlp.seed = derive_seed(config.seed, "train:nn");
            hyper.bayes.categorical_features = prepared.categorical_feature_indices.clone();
            let model = train(spec.kind, &prepared.train, &hyper)?;
            let evaluation = evaluate(&model, &prepared.test, config.threshold)?;
            Ok((spec.kind, model, evaluation))
        })
        .collect::<Result<Vec<_>>>()?;

    let rows: Vec<ModelRow> = trained
        .iter()
        .map(|(kind, _, ev)| ModelRow {
            kind: *kind,
            metrics: ev.metrics,
            threshold: ev.threshold,
            counts: ev.counts,
        })
        .collect();
    let report = ComparisonReport::new(
        config.experiment.clone(),
        provenance_string(config),
        rows,
    )?;

    let out = &config.out_dir;
    std::fs::create_dir_all(out)?;
    std::fs::write(
        out.join("report.txt"),
        render_comparison(&report, TableFormat::Text),
    )?;
    std::fs::write(
        out.join("report.csv"),
        render_comparison(&report, TableFormat::Csv),
    )?;
    let curves: Vec<(String, RocCurve)> = trained
        .iter()
        .map(|(kind, _, ev)| (kind.display_name().to_string(), ev.curve.clone()))
        .collect();
    std::fs::write(out.join("roc.svg"), crate::report::plot_roc(&curves))?;

    for (kind, model, ev) in &trained {
        let dir = out.join("models").join(kind.as_str());
        std::fs::create_dir_all(&dir)?;
        let bundle = PipelineBundle {
            disease: config.disease,
            schema: prepared.input_schema.clone(),
            imputer: prepared.imputer.clone(),
            encoder: prepared.encoder.clone(),
            feature_subset: config.feature_subset.clone(),
            threshold: ev.threshold,
            model: model.clone(),
        };
        std::fs::write(dir.join("bundle.tabmed"), save_bundle(&bundle))?;
        std::fs::write(dir.join("roc.csv"), roc_csv(&ev.curve))?;
        std::fs::write(dir.join("confusion.txt"), render_confusion(&ev.counts))?;
    }

    let evaluations: Vec<(ModelKind, Evaluation)> = trained
        .into_iter()
        .map(|(kind, _, ev)| (kind, ev))
        .collect();
    std::fs::write(
        out.join("results.kv"),
        results_kv(config, &report, &evaluations, &prepared.unseen_counts),
    )?;

    // Timestamps are confined to this sidecar log.
    let now = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut log = format!("completed_at_unix = {now}\n");
    for w in &warnings {
        let _ = writeln!(log, "warning = {w}");
    }
    std::fs::write(out.join("run.log"), log)?;

    Ok(RunArtifacts {
        report,
        evaluations,
        validation: prepared.validation,
        unseen_counts: prepared.unseen_counts,
        warnings,
    })
}

/// Reload the comparison report and curves from a run directory, for
/// re-rendering without retraining.
pub fn load_results(dir: &Path) -> Result<(ComparisonReport, Vec<(String, RocCurve)>)> {
    let text = std::fs::read_to_string(dir.join("results.kv"))?;
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for line in text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let get = |key: &str| -> Result<&String> {
        map.get(key)
            .ok_or_else(|| Error::config(key, "missing from results.kv"))
    };
    let experiment = get("experiment")?.clone();
    let provenance = get("provenance")?.clone();
    let kinds: Vec<ModelKind> = get("models")?
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_>>()?;

    let parse_opt = |key: &str, none_word: &str| -> Result<Option<f64>> {
        let raw = get(key)?;
        if raw == none_word {
            return Ok(None);
        }
        raw.parse::<f64>()
            .map(Some)
            .map_err(|_| Error::config(key, format!("bad value `{raw}`")))
    };
    let parse_num = |key: &str| -> Result<f64> {
        get(key)?
            .parse::<f64>()
            .map_err(|_| Error::config(key, "bad number"))
    };
    let parse_count = |key: &str| -> Result<u64> {
        get(key)?
            .parse::<u64>()
            .map_err(|_| Error::config(key, "bad count"))
    };

    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for kind in kinds {
        let k = kind.as_str();
        let metrics = MetricBundle {
            precision: parse_opt(&format!("{k}.precision"), "undefined")?,
            recall: parse_opt(&format!("{k}.recall"), "undefined")?,
            f1: parse_opt(&format!("{k}.f1"), "undefined")?,
            accuracy: parse_num(&format!("{k}.accuracy"))?,
            auc: parse_num(&format!("{k}.auc"))?,
        };
        let threshold = ThresholdChoice {
            threshold: parse_num(&format!("{k}.threshold"))?,
            criterion: ThresholdCriterion::parse(get(&format!("{k}.criterion"))?)?,
            achieved: parse_opt(&format!("{k}.achieved"), "none")?,
        };
        let counts = ConfusionCounts {
            tp: parse_count(&format!("{k}.tp"))?,
            fp: parse_count(&format!("{k}.fp"))?,
            fn_: parse_count(&format!("{k}.fn"))?,
            tn: parse_count(&format!("{k}.tn"))?,
        };
        rows.push(ModelRow {
            kind,
            metrics,
            threshold,
            counts,
        });
        let roc_path = dir.join("models").join(k).join("roc.csv");
        if roc_path.exists() {
            let curve = parse_roc_csv(&std::fs::read_to_string(roc_path)?)?;
            curves.push((kind.display_name().to_string(), curve));
        }
    }
    Ok((ComparisonReport::new(experiment, provenance, rows)?, curves))
}
