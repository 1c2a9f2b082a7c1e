//! Row/column cleaning: deduplication, null-column dropping, and target
//! binarization.

use std::collections::BTreeSet;

use crate::data::{Cell, ColumnKind, ColumnSpec, Table};
use crate::error::{Error, Result};

/// Remove fully identical rows, keeping the first occurrence. Missing
/// compares equal to missing; row order is otherwise preserved.
pub fn dedupe(table: &Table) -> Table {
    let mut seen: Vec<&Vec<Cell>> = Vec::new();
    let mut rows = Vec::new();
    for row in table.rows() {
        if !seen.contains(&row) {
            seen.push(row);
            rows.push(row.clone());
        }
    }
    table.with_rows(rows)
}

/// Result of [`drop_null_columns`].
#[derive(Debug)]
pub struct NullDropOutcome {
    pub table: Table,
    pub dropped_columns: Vec<String>,
    /// Rows removed because their target cell was missing.
    pub dropped_rows: usize,
}

/// Remove every column containing at least one missing cell.
///
/// The target column is never removed: rows with a missing target are
/// dropped first (and reported), then the column scan runs over the
/// remaining rows.
pub fn drop_null_columns(table: &Table) -> Result<NullDropOutcome> {
    let target = table.schema().target_index();
    let kept_rows: Vec<Vec<Cell>> = table
        .rows()
        .iter()
        .filter(|row| !row[target].is_missing())
        .cloned()
        .collect();
    let dropped_rows = table.n_rows() - kept_rows.len();

    let mut keep = Vec::new();
    let mut dropped_columns = Vec::new();
    for (idx, col) in table.schema().columns().iter().enumerate() {
        let has_null = kept_rows.iter().any(|row| row[idx].is_missing());
        if has_null && idx != target {
            dropped_columns.push(col.name.clone());
        } else {
            keep.push(idx);
        }
    }

    let schema = table.schema().project(&keep)?;
    let rows = kept_rows
        .into_iter()
        .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
        .collect();
    Ok(NullDropOutcome {
        table: Table::new(schema, rows)?,
        dropped_columns,
        dropped_rows,
    })
}

/// Map a categorical target to numeric 0/1: tokens in `positive_labels`
/// become 1, all others 0. Missing target cells stay missing so validation
/// and assembly surface them.
pub fn binarize_target(table: &Table, positive_labels: &BTreeSet<String>) -> Result<Table> {
    if positive_labels.is_empty() {
        return Err(Error::config(
            "binarize.positive",
            "the positive label set must not be empty",
        ));
    }
    let target = table.schema().target_index();
    let spec = table.schema().target();
    if spec.kind != ColumnKind::Categorical {
        return Err(Error::Schema(format!(
            "target column `{}` is already numeric; binarization applies to categorical targets",
            spec.name
        )));
    }
    let schema = table.schema().with_column_replaced(
        target,
        ColumnSpec::new(
            spec.name.clone(),
            ColumnKind::Numeric,
            spec.role,
            spec.description.clone(),
        ),
    )?;
    let rows = table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(idx, cell)| {
                    if idx != target {
                        return cell.clone();
                    }
                    match cell {
                        Cell::Token(t) => {
                            Cell::Number(if positive_labels.contains(t) { 1.0 } else { 0.0 })
                        }
                        Cell::Missing => Cell::Missing,
                        Cell::Number(_) => unreachable!("categorical target"),
                    }
                })
                .collect()
        })
        .collect();
    Table::new(schema, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{ColumnRole, Schema};

    fn schema3() -> Schema {
        Schema::new(vec![
            ColumnSpec::new("a", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("b", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("y", ColumnKind::Numeric, ColumnRole::Target, ""),
        ])
        .unwrap()
    }

    fn row(a: Cell, b: Cell, y: Cell) -> Vec<Cell> {
        vec![a, b, y]
    }

    #[test]
    fn dedupe_keeps_first_occurrence() {
        let r1 = row(Cell::Number(1.0), Cell::Missing, Cell::Number(0.0));
        let r2 = row(Cell::Number(2.0), Cell::Number(2.0), Cell::Number(1.0));
        let t = Table::new(schema3(), vec![r1.clone(), r1.clone(), r2.clone()]).unwrap();
        let out = dedupe(&t);
        assert_eq!(out.rows(), &[r1, r2]);
    }

    #[test]
    fn dedupe_identity_on_distinct_rows() {
        let t = Table::new(
            schema3(),
            vec![
                row(Cell::Number(1.0), Cell::Number(0.0), Cell::Number(0.0)),
                row(Cell::Number(1.0), Cell::Number(0.5), Cell::Number(0.0)),
            ],
        )
        .unwrap();
        assert_eq!(dedupe(&t), t);
    }

    #[test]
    fn dedupe_is_idempotent() {
        let r = row(Cell::Number(1.0), Cell::Number(2.0), Cell::Number(1.0));
        let t = Table::new(schema3(), vec![r.clone(), r.clone(), r]).unwrap();
        let once = dedupe(&t);
        assert_eq!(dedupe(&once), once);
    }

    #[test]
    fn null_columns_dropped_and_named() {
        let t = Table::new(
            schema3(),
            vec![
                row(Cell::Number(1.0), Cell::Missing, Cell::Number(0.0)),
                row(Cell::Number(2.0), Cell::Number(1.0), Cell::Number(1.0)),
            ],
        )
        .unwrap();
        let out = drop_null_columns(&t).unwrap();
        assert_eq!(out.dropped_columns, vec!["b".to_string()]);
        assert_eq!(out.table.n_cols(), 2);
        assert_eq!(out.dropped_rows, 0);
    }

    #[test]
    fn dense_table_untouched() {
        let t = Table::new(
            schema3(),
            vec![row(Cell::Number(1.0), Cell::Number(2.0), Cell::Number(0.0))],
        )
        .unwrap();
        let out = drop_null_columns(&t).unwrap();
        assert!(out.dropped_columns.is_empty());
        assert_eq!(out.table, t);
    }

    #[test]
    fn missing_target_drops_row_not_column() {
        let mut rows = vec![];
        for i in 0..9 {
            rows.push(row(
                Cell::Number(i as f64),
                Cell::Number(0.0),
                Cell::Number(1.0),
            ));
        }
        rows.push(row(Cell::Number(9.0), Cell::Number(0.0), Cell::Missing));
        let t = Table::new(schema3(), rows).unwrap();
        let out = drop_null_columns(&t).unwrap();
        assert_eq!(out.table.n_rows(), 9);
        assert_eq!(out.dropped_rows, 1);
        assert!(out.table.schema().index_of("y").is_ok());
        assert!(out.dropped_columns.is_empty());
    }

    fn cat_target_table(labels: Vec<&str>) -> Table {
        let schema = Schema::new(vec![
            ColumnSpec::new("x", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("target", ColumnKind::Categorical, ColumnRole::Target, ""),
        ])
        .unwrap();
        let rows = labels
            .into_iter()
            .map(|l| vec![Cell::Number(0.0), Cell::Token(l.into())])
            .collect();
        Table::new(schema, rows).unwrap()
    }

    fn positives(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binarize_maps_positive_set() {
        let t = cat_target_table(vec!["hyperthyroid", "-", "hypothyroid"]);
        let out = binarize_target(&t, &positives(&["hyperthyroid", "hypothyroid"])).unwrap();
        let target: Vec<f64> = out
            .column_view("target")
            .unwrap()
            .iter()
            .map(|c| c.as_number().unwrap())
            .collect();
        assert_eq!(target, vec![1.0, 0.0, 1.0]);
        assert_eq!(out.schema().target().kind, ColumnKind::Numeric);
    }

    #[test]
    fn binarize_all_in_or_out() {
        let t = cat_target_table(vec!["a", "a"]);
        let all_in = binarize_target(&t, &positives(&["a"])).unwrap();
        assert!(all_in
            .column_view("target")
            .unwrap()
            .iter()
            .all(|c| c.as_number() == Some(1.0)));
        let none_in = binarize_target(&t, &positives(&["z"])).unwrap();
        assert!(none_in
            .column_view("target")
            .unwrap()
            .iter()
            .all(|c| c.as_number() == Some(0.0)));
    }

    #[test]
    fn binarize_rejects_empty_positive_set() {
        let t = cat_target_table(vec!["a"]);
        assert!(binarize_target(&t, &BTreeSet::new()).is_err());
    }
}
