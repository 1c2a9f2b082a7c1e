//! Rendering: comparison tables (text and CSV), confusion grids, and SVG
//! ROC plots. All renderers are pure functions of their inputs and emit
//! byte-deterministic output.

mod svg;

pub use svg::plot_roc;

use crate::error::{Error, Result};
use crate::eval::{ConfusionCounts, MetricBundle, ThresholdChoice};
use crate::model::ModelKind;

/// One model's results within a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelRow {
    pub kind: ModelKind,
    pub metrics: MetricBundle,
    pub threshold: ThresholdChoice,
    pub counts: ConfusionCounts,
}

/// A per-experiment comparison: one row per model, all evaluated on the same
/// test partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub experiment: String,
    /// Dataset provenance: source file or synthetic spec, seed, split.
    pub provenance: String,
    pub rows: Vec<ModelRow>,
}

impl ComparisonReport {
    pub fn new(experiment: String, provenance: String, rows: Vec<ModelRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Schema("comparison report needs at least one row".into()));
        }
        let first = &rows[0].counts;
        for row in &rows[1..] {
            if row.counts.total() != first.total() || row.counts.positives() != first.positives()
            {
                return Err(Error::Schema(format!(
                    "report rows disagree on the test partition: {} vs {} rows",
                    row.counts.total(),
                    first.total()
                )));
            }
        }
        Ok(ComparisonReport {
            experiment,
            provenance,
            rows,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

/// Round half away from zero to `places` decimals.
fn round_half_away(v: f64, places: i32) -> f64 {
    let p = 10f64.powi(places);
    (v * p).round() / p
}

/// A ratio to 4 decimals, e.g. `0.9263`.
pub(crate) fn fmt_ratio(v: f64) -> String {
    format!("{:.4}", round_half_away(v, 4))
}

/// A percentage to 2 decimals, e.g. `90.94%`.
pub(crate) fn fmt_pct(v: f64) -> String {
    format!("{:.2}%", round_half_away(v * 100.0, 2))
}

fn pct_cell(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_pct(v),
        None => "—".to_string(),
    }
}

/// Render the comparison as a table: columns AUC, precision, recall, F1,
/// accuracy; percentages to two decimals; undefined metrics as an em dash
/// (empty in CSV). Row order is the configured model order.
pub fn render_comparison(report: &ComparisonReport, format: TableFormat) -> String {
    match format {
        TableFormat::Text => {
            let mut lines = vec![format!(
                "{:<20} | {:>6} | {:>9} | {:>7} | {:>7} | {:>8}",
                "Model", "AUC", "Precision", "Recall", "F1", "Accuracy"
            )];
            for row in &report.rows {
                lines.push(format!(
                    "{:<20} | {:>6} | {:>9} | {:>7} | {:>7} | {:>8}",
                    row.kind.display_name(),
                    fmt_ratio(row.metrics.auc),
                    pct_cell(row.metrics.precision),
                    pct_cell(row.metrics.recall),
                    pct_cell(row.metrics.f1),
                    fmt_pct(row.metrics.accuracy),
                ));
            }
            let mut out = lines.join("\n");
            out.push('\n');
            out
        }
        TableFormat::Csv => {
            let mut out = String::from("model,auc,precision_pct,recall_pct,f1_pct,accuracy_pct\n");
            for row in &report.rows {
                let cell = |v: Option<f64>| match v {
                    Some(v) => format!("{:.2}", round_half_away(v * 100.0, 2)),
                    None => String::new(),
                };
                let accuracy = round_half_away(row.metrics.accuracy * 100.0, 2);
                out.push_str(&format!(
                    "{},{},{},{},{},{accuracy:.2}\n",
                    row.kind.as_str(),
                    fmt_ratio(row.metrics.auc),
                    cell(row.metrics.precision),
                    cell(row.metrics.recall),
                    cell(row.metrics.f1),
                ));
            }
            out
        }
    }
}

/// Render a 2x2 confusion grid: rows are actual (positive first), columns
/// predicted (positive first).
pub fn render_confusion(c: &ConfusionCounts) -> String {
    let cells = [
        c.tp.to_string(),
        c.fn_.to_string(),
        c.fp.to_string(),
        c.tn.to_string(),
    ];
    let width = cells
        .iter()
        .map(String::len)
        .max()
        .unwrap()
        .max("Predicted Negative".len());
    format!(
        "{:<16} {:>w$} {:>w$}\n{:<16} {:>w$} {:>w$}\n{:<16} {:>w$} {:>w$}\n",
        "",
        "Predicted Positive",
        "Predicted Negative",
        "Actual Positive",
        cells[0],
        cells[1],
        "Actual Negative",
        cells[2],
        cells[3],
        w = width.max("Predicted Positive".len())
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{RocCurve, RocPoint, ThresholdCriterion};

    fn bundle(auc: f64, p: Option<f64>, r: Option<f64>, f1: Option<f64>, acc: f64) -> MetricBundle {
        MetricBundle {
            precision: p,
            recall: r,
            accuracy: acc,
            f1,
            auc,
        }
    }

    fn row(kind: ModelKind, metrics: MetricBundle) -> ModelRow {
        ModelRow {
            kind,
            metrics,
            threshold: ThresholdChoice {
                threshold: 0.5,
                criterion: ThresholdCriterion::MaxF1,
                achieved: Some(0.9),
            },
            counts: ConfusionCounts {
                tp: 10,
                fp: 2,
                fn_: 3,
                tn: 15,
            },
        }
    }

    #[test]
    fn gbt_row_formats_like_reference_table() {
        let report = ComparisonReport::new(
            "thyroid".into(),
            "fixture".into(),
            vec![row(
                ModelKind::Gbt,
                bundle(0.9263, Some(0.9094), Some(0.8619), Some(0.8851), 0.9779),
            )],
        )
        .unwrap();
        let text = render_comparison(&report, TableFormat::Text);
        let line = text.lines().nth(1).unwrap();
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        assert_eq!(
            cells,
            vec!["GBT", "0.9263", "90.94%", "86.19%", "88.51%", "97.79%"]
        );
    }

    #[test]
    fn undefined_metric_renders_as_dash() {
        let report = ComparisonReport::new(
            "x".into(),
            "fixture".into(),
            vec![row(ModelKind::Lr, bundle(0.5, None, Some(0.0), None, 0.6))],
        )
        .unwrap();
        let text = render_comparison(&report, TableFormat::Text);
        assert!(text.contains('—'));
        let csv = render_comparison(&report, TableFormat::Csv);
        assert!(csv.lines().nth(1).unwrap().contains(",,"));
    }

    #[test]
    fn csv_round_trips_at_printed_precision() {
        let source = bundle(0.87654321, Some(0.912345), Some(0.777777), Some(0.839284), 0.901234);
        let report = ComparisonReport::new(
            "x".into(),
            "fixture".into(),
            vec![row(ModelKind::Rf, source)],
        )
        .unwrap();
        let csv = render_comparison(&report, TableFormat::Csv);
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "rf");
        let auc: f64 = fields[1].parse().unwrap();
        assert!((auc - source.auc).abs() <= 5e-5);
        for (field, expected) in fields[2..].iter().zip([
            source.precision.unwrap(),
            source.recall.unwrap(),
            source.f1.unwrap(),
            source.accuracy,
        ]) {
            let pct: f64 = field.parse().unwrap();
            assert!((pct / 100.0 - expected).abs() <= 5e-5);
        }
    }

    #[test]
    fn mismatched_partitions_rejected() {
        let mut r1 = row(ModelKind::Lr, bundle(0.5, None, None, None, 0.5));
        let r2 = row(ModelKind::Dt, bundle(0.5, None, None, None, 0.5));
        r1.counts.tn += 1;
        assert!(ComparisonReport::new("x".into(), "p".into(), vec![r1, r2]).is_err());
    }

    #[test]
    fn confusion_grid_layout() {
        let grid = render_confusion(&ConfusionCounts {
            tp: 112,
            fp: 16,
            fn_: 15,
            tn: 59,
        });
        let lines: Vec<&str> = grid.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].contains("Predicted Positive"));
        assert!(lines[0].contains("Predicted Negative"));
        let top: Vec<&str> = lines[1].split_whitespace().collect();
        assert_eq!(top, vec!["Actual", "Positive", "112", "15"]);
        let bottom: Vec<&str> = lines[2].split_whitespace().collect();
        assert_eq!(bottom, vec!["Actual", "Negative", "16", "59"]);
    }

    #[test]
    fn renderers_are_pure() {
        let curve = RocCurve {
            points: vec![
                RocPoint {
                    threshold: f64::INFINITY,
                    fpr: 0.0,
                    tpr: 0.0,
                },
                RocPoint {
                    threshold: 0.5,
                    fpr: 1.0,
                    tpr: 1.0,
                },
            ],
        };
        let a = plot_roc(&[("baseline".to_string(), curve.clone())]);
        let b = plot_roc(&[("baseline".to_string(), curve)]);
        assert_eq!(a, b);
    }
}
