//! Label encoding of categorical columns: dense indices ordered by training
//! frequency.

use std::collections::BTreeMap;

use crate::data::{Cell, ColumnKind, ColumnSpec, Table};
use crate::error::{Error, Result};

/// Per-column mapping token -> index. Indices are dense 0..k-1 in descending
/// training frequency, ties broken by ascending token order. At apply time an
/// unseen token maps to the reserved index k.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnEncoder {
    pub column: String,
    /// tokens[i] is the token encoded as i.
    pub tokens: Vec<String>,
}

impl ColumnEncoder {
    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t == token)
    }

    /// The reserved index for unseen tokens.
    pub fn unseen_index(&self) -> usize {
        self.tokens.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EncoderMap {
    pub columns: Vec<ColumnEncoder>,
}

impl EncoderMap {
    pub fn encoder_for(&self, column: &str) -> Option<&ColumnEncoder> {
        self.columns.iter().find(|c| c.column == column)
    }
}

/// Result of applying an encoder.
#[derive(Debug)]
pub struct EncodedTable {
    pub table: Table,
    /// Cells that mapped to a reserved unseen index, per column.
    pub unseen_counts: BTreeMap<String, usize>,
}

impl EncodedTable {
    pub fn total_unseen(&self) -> usize {
        self.unseen_counts.values().sum()
    }
}

/// Fit encoders for the named categorical columns.
///
/// Every named column must be categorical and fully imputed; a missing cell
/// is an encode-before-impute error.
pub fn fit_encoder(table: &Table, columns: &[String]) -> Result<EncoderMap> {
    let mut encoders = Vec::new();
    for name in columns {
        let idx = table.schema().index_of(name)?;
        let col = table.schema().column(idx);
        if col.kind != ColumnKind::Categorical {
            return Err(Error::config(
                format!("encode.{name}"),
                "label encoding requires a categorical column",
            ));
        }
        let mut freqs: BTreeMap<&str, usize> = BTreeMap::new();
        for row in table.rows() {
            match &row[idx] {
                Cell::Token(t) => *freqs.entry(t).or_insert(0) += 1,
                Cell::Missing => return Err(Error::EncodeBeforeImpute(name.clone())),
                Cell::Number(_) => unreachable!("table invariant"),
            }
        }
        let mut ordered: Vec<(&str, usize)> = freqs.into_iter().collect();
        // Descending frequency; BTreeMap already yields ascending tokens, and
        // the stable sort preserves that order among equal counts.
        ordered.sort_by_key(|(_, count)| std::cmp::Reverse(*count));
        encoders.push(ColumnEncoder {
            column: name.clone(),
            tokens: ordered.into_iter().map(|(t, _)| t.to_string()).collect(),
        });
    }
    Ok(EncoderMap { columns: encoders })
}

/// Replace encoded columns with their numeric indices.
///
/// Encoded columns are renamed `<name>_index` and become numeric. Unseen
/// tokens (and any residual missing cells) map to the reserved index k and
/// are counted, never fatal: prediction-time data must not crash the run.
pub fn apply_encoder(table: &Table, encoder: &EncoderMap) -> Result<EncodedTable> {
    let mut unseen_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut schema = table.schema().clone();
    let mut column_plan: Vec<Option<&ColumnEncoder>> = vec![None; table.n_cols()];

    for enc in &encoder.columns {
        let idx = schema.index_of(&enc.column)?;
        let old = schema.column(idx);
        schema = schema.with_column_replaced(
            idx,
            ColumnSpec::new(
                format!("{}_index", enc.column),
                ColumnKind::Numeric,
                old.role,
                old.description.clone(),
            ),
        )?;
        column_plan[idx] = Some(enc);
        unseen_counts.insert(enc.column.clone(), 0);
    }

    let rows: Vec<Vec<Cell>> = table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(idx, cell)| match column_plan[idx] {
                    Some(enc) => {
                        let index = match cell {
                            Cell::Token(t) => enc.index_of(t).unwrap_or_else(|| {
                                *unseen_counts.get_mut(&enc.column).unwrap() += 1;
                                enc.unseen_index()
                            }),
                            _ => {
                                *unseen_counts.get_mut(&enc.column).unwrap() += 1;
                                enc.unseen_index()
                            }
                        };
                        Cell::Number(index as f64)
                    }
                    None => cell.clone(),
                })
                .collect()
        })
        .collect();

    Ok(EncodedTable {
        table: Table::new(schema, rows)?,
        unseen_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ColumnRole, Schema};

    fn cat_table(tokens: Vec<Option<&str>>) -> Table {
        let schema = Schema::new(vec![
            ColumnSpec::new("c", ColumnKind::Categorical, ColumnRole::Feature, ""),
            ColumnSpec::new("y", ColumnKind::Numeric, ColumnRole::Target, ""),
        ])
        .unwrap();
        let rows = tokens
            .into_iter()
            .map(|t| {
                vec![
                    t.map_or(Cell::Missing, |t| Cell::Token(t.into())),
                    Cell::Number(0.0),
                ]
            })
            .collect();
        Table::new(schema, rows).unwrap()
    }

    fn fit(table: &Table) -> EncoderMap {
        fit_encoder(table, &["c".to_string()]).unwrap()
    }

    #[test]
    fn frequency_descending_order() {
        let enc = fit(&cat_table(vec![Some("f"), Some("m"), Some("f")]));
        assert_eq!(enc.columns[0].tokens, vec!["f", "m"]);
    }

    #[test]
    fn tie_breaks_lexicographically() {
        let enc = fit(&cat_table(vec![Some("x"), Some("y")]));
        assert_eq!(enc.columns[0].tokens, vec!["x", "y"]);
    }

    #[test]
    fn frequency_then_tie_rule() {
        // b:2, a:2, c:1 -> tie between a and b resolved a-first.
        let enc = fit(&cat_table(vec![
            Some("b"),
            Some("b"),
            Some("a"),
            Some("a"),
            Some("c"),
        ]));
        assert_eq!(enc.columns[0].tokens, vec!["a", "b", "c"]);
    }

    #[test]
    fn missing_cell_is_encode_before_impute() {
        let t = cat_table(vec![Some("a"), None]);
        let err = fit_encoder(&t, &["c".to_string()]);
        assert!(matches!(err, Err(Error::EncodeBeforeImpute(c)) if c == "c"));
    }

    #[test]
    fn apply_maps_tokens_to_indices() {
        let train = cat_table(vec![Some("f"), Some("m"), Some("f")]);
        let enc = fit(&train);
        let out = apply_encoder(&cat_table(vec![Some("m"), Some("f")]), &enc).unwrap();
        assert_eq!(out.table.cell(0, 0).as_number(), Some(1.0));
        assert_eq!(out.table.cell(1, 0).as_number(), Some(0.0));
        assert_eq!(out.total_unseen(), 0);
        assert_eq!(out.table.schema().column(0).name, "c_index");
        assert_eq!(out.table.schema().column(0).kind, ColumnKind::Numeric);
    }

    #[test]
    fn unseen_token_gets_reserved_index() {
        let enc = fit(&cat_table(vec![Some("f"), Some("m")]));
        let out = apply_encoder(&cat_table(vec![Some("u")]), &enc).unwrap();
        assert_eq!(out.table.cell(0, 0).as_number(), Some(2.0));
        assert_eq!(out.unseen_counts["c"], 1);
    }

    #[test]
    fn empty_table_passes_through() {
        let enc = fit(&cat_table(vec![Some("a")]));
        let out = apply_encoder(&cat_table(vec![]), &enc).unwrap();
        assert_eq!(out.table.n_rows(), 0);
        assert_eq!(out.total_unseen(), 0);
    }

    #[test]
    fn decode_via_inverse_is_identity_on_seen_tokens() {
        let train = cat_table(vec![Some("a"), Some("b"), Some("b"), Some("c")]);
        let enc = fit(&train);
        let col = &enc.columns[0];
        for token in ["a", "b", "c"] {
            let idx = col.index_of(token).unwrap();
            assert_eq!(col.tokens[idx], token);
        }
    }
}
