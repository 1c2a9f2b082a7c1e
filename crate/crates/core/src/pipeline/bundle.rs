//! The pipeline bundle: everything the prediction phase needs in one
//! artifact — input schema, fitted imputer, encoder, feature subset, chosen
//! threshold, and the model.

use crate::data::{ColumnKind, ColumnRole, ColumnSpec, Schema, Table};
use crate::error::{Error, Result};
use crate::eval::{ThresholdChoice, ThresholdCriterion};
use crate::ingest::DiseaseId;
use crate::model::persist::{
    frame, parse_f64, parse_usize, read_model_body, unframe, write_model_body, Cursor,
};
use crate::model::ScoreModel;
use crate::preprocess::{
    apply_encoder, apply_imputer, assemble_features, ColumnEncoder, EncoderMap, FillValue,
    FittedImputer, ImputeRule,
};

const BUNDLE_TAG: &str = "tabmed-bundle";

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineBundle {
    pub disease: DiseaseId,
    /// Schema of the raw input the bundle expects (pre-transform).
    pub schema: Schema,
    pub imputer: FittedImputer,
    pub encoder: EncoderMap,
    pub feature_subset: Option<Vec<String>>,
    pub threshold: ThresholdChoice,
    pub model: ScoreModel,
}

/// Scores for one prediction run.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictOutput {
    pub scores: Vec<f64>,
    pub predicted: Vec<u8>,
    /// Cells that hit an encoder's reserved unseen index.
    pub unseen_count: usize,
}

impl PipelineBundle {
    /// Run the fitted transform chain and model over a raw table.
    /// Missing values and unseen categories are handled by the bundled
    /// imputer and encoder; this path must not fail on schema-conforming
    /// input.
    pub fn predict_table(&self, table: &Table) -> Result<PredictOutput> {
        let imputed = apply_imputer(table, &self.imputer)?;
        let encoded = apply_encoder(&imputed, &self.encoder)?;
        let unseen_count = encoded.total_unseen();
        let (features, _) = assemble_features(&encoded.table, self.feature_subset.as_deref())?;
        let scores = self.model.predict_scores(&features)?;
        let predicted = scores
            .iter()
            .map(|&s| u8::from(s >= self.threshold.threshold))
            .collect();
        Ok(PredictOutput {
            scores,
            predicted,
            unseen_count,
        })
    }
}

fn escape(token: &str) -> String {
    token
        .replace('\\', "\\\\")
        .replace('\n', "\\n")
        .replace('\r', "\\r")
}

fn unescape(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    let mut chars = token.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

/// Serialize a bundle with the same framing as model artifacts.
pub fn save_bundle(bundle: &PipelineBundle) -> Vec<u8> {
    let mut body = String::new();
    body.push_str(&format!("disease {}\n", bundle.disease));
    match &bundle.feature_subset {
        None => body.push_str("features all\n"),
        Some(names) => {
            body.push_str(&format!("features {}\n", names.len()));
            for name in names {
                body.push_str(&format!("feat {name}\n"));
            }
        }
    }
    let achieved = match bundle.threshold.achieved {
        Some(v) => format!("{v}"),
        None => "none".to_string(),
    };
    body.push_str(&format!(
        "threshold {} {} {achieved}\n",
        bundle.threshold.criterion.as_str(),
        bundle.threshold.threshold
    ));
    body.push_str(&format!("schema {}\n", bundle.schema.len()));
    for col in bundle.schema.columns() {
        body.push_str(&format!(
            "column {} {} {}\n",
            col.name,
            col.kind.as_str(),
            col.role.as_str()
        ));
    }
    body.push_str(&format!("imputer {}\n", bundle.imputer.fills.len()));
    for (column, rule, fill) in &bundle.imputer.fills {
        match fill {
            FillValue::Number(v) => {
                body.push_str(&format!("fill {column} {} number {v}\n", rule.as_str()))
            }
            FillValue::Token(t) => body.push_str(&format!(
                "fill {column} {} token {}\n",
                rule.as_str(),
                escape(t)
            )),
        }
    }
    body.push_str(&format!("encoder {}\n", bundle.encoder.columns.len()));
    for enc in &bundle.encoder.columns {
        body.push_str(&format!("enccol {} {}\n", enc.column, enc.tokens.len()));
        for token in &enc.tokens {
            body.push_str(&format!("tok {}\n", escape(token)));
        }
    }
    body.push_str("model\n");
    write_model_body(&bundle.model, &mut body);
    body.push_str("end\n");
    frame(BUNDLE_TAG, &body)
}

fn parse_kind(token: &str) -> Result<ColumnKind> {
    match token {
        "numeric" => Ok(ColumnKind::Numeric),
        "categorical" => Ok(ColumnKind::Categorical),
        other => Err(Error::ArtifactTruncated(format!("bad column kind `{other}`"))),
    }
}

fn parse_role(token: &str) -> Result<ColumnRole> {
    match token {
        "feature" => Ok(ColumnRole::Feature),
        "target" => Ok(ColumnRole::Target),
        "identifier" => Ok(ColumnRole::Identifier),
        "excluded" => Ok(ColumnRole::Excluded),
        other => Err(Error::ArtifactTruncated(format!("bad column role `{other}`"))),
    }
}

/// Load a bundle produced by [`save_bundle`].
pub fn load_bundle(bytes: &[u8]) -> Result<PipelineBundle> {
    let body = unframe(BUNDLE_TAG, bytes)?;
    let mut cursor = Cursor::new(body);

    let disease: DiseaseId = cursor.expect("disease")?.parse()?;

    let features_rest = cursor.expect("features")?;
    let feature_subset = if features_rest == "all" {
        None
    } else {
        let k = parse_usize(features_rest)?;
        let mut names = Vec::with_capacity(k);
        for _ in 0..k {
            names.push(cursor.expect("feat")?.to_string());
        }
        Some(names)
    };

    let threshold_rest = cursor.expect("threshold")?;
    let mut parts = threshold_rest.split_whitespace();
    let criterion = ThresholdCriterion::parse(
        parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("threshold missing criterion".into()))?,
    )?;
    let threshold = parse_f64(
        parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("threshold missing value".into()))?,
    )?;
    let achieved = match parts.next() {
        Some("none") | None => None,
        Some(v) => Some(parse_f64(v)?),
    };

    let n_cols = parse_usize(cursor.expect("schema")?)?;
    let mut columns = Vec::with_capacity(n_cols);
    for _ in 0..n_cols {
        let rest = cursor.expect("column")?;
        let mut parts = rest.split_whitespace();
        let name = parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("column missing name".into()))?;
        let kind = parse_kind(parts.next().unwrap_or_default())?;
        let role = parse_role(parts.next().unwrap_or_default())?;
        columns.push(ColumnSpec::new(name, kind, role, ""));
    }
    let schema = Schema::new(columns)?;

    let n_fills = parse_usize(cursor.expect("imputer")?)?;
    let mut fills = Vec::with_capacity(n_fills);
    for _ in 0..n_fills {
        let rest = cursor.expect("fill")?;
        let mut parts = rest.splitn(4, ' ');
        let column = parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("fill missing column".into()))?
            .to_string();
        let rule: ImputeRule = parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("fill missing rule".into()))?
            .parse()?;
        let variant = parts.next();
        let payload = parts.next().unwrap_or_default();
        let fill = match variant {
            Some("number") => FillValue::Number(parse_f64(payload)?),
            Some("token") => FillValue::Token(unescape(payload)),
            other => {
                return Err(Error::ArtifactTruncated(format!(
                    "bad fill variant {other:?}"
                )))
            }
        };
        fills.push((column, rule, fill));
    }

    let n_encoders = parse_usize(cursor.expect("encoder")?)?;
    let mut encoders = Vec::with_capacity(n_encoders);
    for _ in 0..n_encoders {
        let rest = cursor.expect("enccol")?;
        let mut parts = rest.split_whitespace();
        let column = parts
            .next()
            .ok_or_else(|| Error::ArtifactTruncated("enccol missing column".into()))?
            .to_string();
        let k = parse_usize(parts.next().unwrap_or_default())?;
        let mut tokens = Vec::with_capacity(k);
        for _ in 0..k {
            tokens.push(unescape(cursor.expect("tok")?));
        }
        encoders.push(ColumnEncoder { column, tokens });
    }

    cursor.expect("model")?;
    let model = read_model_body(&mut cursor)?;
    cursor.expect("end")?;

    Ok(PipelineBundle {
        disease,
        schema,
        imputer: FittedImputer { fills },
        encoder: EncoderMap { columns: encoders },
        feature_subset,
        threshold: ThresholdChoice {
            threshold,
            criterion,
            achieved,
        },
        model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Cell;
    use crate::model::tree::{TreeNode, TreeParams};

    fn tiny_bundle() -> PipelineBundle {
        let schema = Schema::new(vec![
            ColumnSpec::new("x", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("c", ColumnKind::Categorical, ColumnRole::Feature, ""),
            ColumnSpec::new("y", ColumnKind::Numeric, ColumnRole::Target, ""),
        ])
        .unwrap();
        PipelineBundle {
            disease: DiseaseId::Heart,
            schema,
            imputer: FittedImputer {
                fills: vec![
                    ("x".into(), ImputeRule::Zero, FillValue::Number(0.0)),
                    ("c".into(), ImputeRule::Mode, FillValue::Token("a b".into())),
                ],
            },
            encoder: EncoderMap {
                columns: vec![ColumnEncoder {
                    column: "c".into(),
                    tokens: vec!["a b".into(), "z".into()],
                }],
            },
            feature_subset: None,
            threshold: ThresholdChoice {
                threshold: 0.5,
                criterion: ThresholdCriterion::MaxF1,
                achieved: Some(0.75),
            },
            model: ScoreModel::Tree(TreeParams {
                root: TreeNode::Internal {
                    feature: 0,
                    threshold: 1.5,
                    left: Box::new(TreeNode::Leaf { value: 0.2 }),
                    right: Box::new(TreeNode::Leaf { value: 0.9 }),
                },
                n_features: 2,
                max_depth: 2,
                min_samples_leaf: 1,
            }),
        }
    }

    #[test]
    fn bundle_round_trips() {
        let bundle = tiny_bundle();
        let bytes = save_bundle(&bundle);
        let loaded = load_bundle(&bytes).unwrap();
        assert_eq!(loaded, bundle);
    }

    #[test]
    fn predict_handles_missing_and_unseen() {
        let bundle = tiny_bundle();
        let table = Table::new(
            bundle.schema.clone(),
            vec![
                vec![Cell::Missing, Cell::Token("never seen".into()), Cell::Missing],
                vec![Cell::Number(2.0), Cell::Token("a b".into()), Cell::Missing],
            ],
        )
        .unwrap();
        let out = bundle.predict_table(&table).unwrap();
        assert_eq!(out.scores.len(), 2);
        assert_eq!(out.unseen_count, 1);
        assert_eq!(out.predicted[0], 0); // x imputed to 0 -> left leaf 0.2
        assert_eq!(out.predicted[1], 1); // x = 2 -> right leaf 0.9
    }

    #[test]
    fn corrupt_bundle_is_a_checksum_error() {
        let mut bytes = save_bundle(&tiny_bundle());
        let idx = bytes.len() / 2;
        bytes[idx] = bytes[idx].wrapping_add(1);
        assert!(matches!(load_bundle(&bytes), Err(Error::ArtifactChecksum)));
    }
}
