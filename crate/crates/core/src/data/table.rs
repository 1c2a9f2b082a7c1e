//! In-memory rectangular tables of mixed-type cells.

use crate::data::schema::{ColumnKind, Schema};
use crate::error::{Error, Result};

/// A single cell. Missingness is explicit: ingestion normalizes blank fields,
/// `"?"` and textual nulls to [`Cell::Missing`], never to a sentinel number.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// A finite numeric value.
    Number(f64),
    /// A non-empty category token.
    Token(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_token(&self) -> Option<&str> {
        match self {
            Cell::Token(t) => Some(t),
            _ => None,
        }
    }

    fn matches_kind(&self, kind: ColumnKind) -> bool {
        match self {
            Cell::Missing => true,
            Cell::Number(_) => kind == ColumnKind::Numeric,
            Cell::Token(_) => kind == ColumnKind::Categorical,
        }
    }
}

/// A rectangular table: an ordered schema plus rows of cells.
///
/// Invariants, enforced at construction:
/// - every row has exactly `schema.len()` cells;
/// - each cell matches its column kind (or is the missing marker);
/// - numeric cells are finite and tokens are non-empty.
///
/// Tables are immutable once built; operations return new tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    schema: Schema,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: Schema, rows: Vec<Vec<Cell>>) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != schema.len() {
                return Err(Error::Schema(format!(
                    "row {r} has {} cells, schema has {}",
                    row.len(),
                    schema.len()
                )));
            }
            for (c, cell) in row.iter().enumerate() {
                let col = schema.column(c);
                if !cell.matches_kind(col.kind) {
                    return Err(Error::Schema(format!(
                        "row {r}, column `{}`: cell variant does not match {} kind",
                        col.name,
                        col.kind.as_str()
                    )));
                }
                match cell {
                    Cell::Number(v) if !v.is_finite() => {
                        return Err(Error::Schema(format!(
                            "row {r}, column `{}`: non-finite numeric cell",
                            col.name
                        )));
                    }
                    Cell::Token(t) if t.is_empty() => {
                        return Err(Error::Schema(format!(
                            "row {r}, column `{}`: empty category token",
                            col.name
                        )));
                    }
                    _ => {}
                }
            }
        }
        Ok(Table { schema, rows })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.schema.len()
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.rows[row][col]
    }

    /// The named column in row order.
    pub fn column_view(&self, name: &str) -> Result<Vec<&Cell>> {
        let idx = self.schema.index_of(name)?;
        Ok(self.rows.iter().map(|r| &r[idx]).collect())
    }

    /// Rebuild with the same schema and new rows. The caller guarantees the
    /// rows came from this table (kinds already validated), so this is a
    /// cheap internal constructor.
    pub(crate) fn with_rows(&self, rows: Vec<Vec<Cell>>) -> Table {
        Table {
            schema: self.schema.clone(),
            rows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::schema::{ColumnRole, ColumnSpec};

    fn small_schema() -> Schema {
        Schema::new(vec![
            ColumnSpec::new("x", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("y", ColumnKind::Numeric, ColumnRole::Target, ""),
        ])
        .unwrap()
    }

    #[test]
    fn rectangularity_enforced() {
        let err = Table::new(small_schema(), vec![vec![Cell::Number(1.0)]]);
        assert!(err.is_err());
    }

    #[test]
    fn kind_mismatch_rejected() {
        let err = Table::new(
            small_schema(),
            vec![vec![Cell::Token("a".into()), Cell::Number(0.0)]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn non_finite_rejected() {
        let err = Table::new(
            small_schema(),
            vec![vec![Cell::Number(f64::NAN), Cell::Number(0.0)]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn column_view_in_row_order() {
        let t = Table::new(
            small_schema(),
            vec![
                vec![Cell::Number(1.0), Cell::Number(0.0)],
                vec![Cell::Missing, Cell::Number(1.0)],
                vec![Cell::Number(3.0), Cell::Number(0.0)],
            ],
        )
        .unwrap();
        let col = t.column_view("x").unwrap();
        assert_eq!(col.len(), 3);
        assert_eq!(col[0].as_number(), Some(1.0));
        assert!(col[1].is_missing());
        assert_eq!(col[2].as_number(), Some(3.0));
    }

    #[test]
    fn column_view_empty_table() {
        let t = Table::new(small_schema(), vec![]).unwrap();
        assert!(t.column_view("x").unwrap().is_empty());
    }

    #[test]
    fn column_view_unknown_name() {
        let t = Table::new(small_schema(), vec![]).unwrap();
        assert!(matches!(
            t.column_view("z"),
            Err(Error::UnknownColumn(n)) if n == "z"
        ));
    }
}
