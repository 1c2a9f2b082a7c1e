//! Per-column summary statistics.

use std::collections::BTreeMap;

use crate::data::schema::ColumnKind;
use crate::data::table::{Cell, Table};

/// Moments of a numeric column over its non-missing cells.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericMoments {
    pub mean: f64,
    /// Population standard deviation (divide by count).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnDetail {
    /// `None` when the column has zero non-missing cells.
    Numeric(Option<NumericMoments>),
    /// Distinct token counts over non-missing cells.
    Categorical(BTreeMap<String, usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSummary {
    pub name: String,
    /// Non-missing cell count.
    pub count: usize,
    pub missing: usize,
    pub detail: ColumnDetail,
}

/// Summary of every column of a table. Missing cells are excluded from the
/// counts and moments; their number is reported separately.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub columns: Vec<ColumnSummary>,
}

impl SummaryStats {
    pub fn column(&self, name: &str) -> Option<&ColumnSummary> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Compute per-column statistics over non-missing cells.
pub fn summarize(table: &Table) -> SummaryStats {
    let columns = table
        .schema()
        .columns()
        .iter()
        .enumerate()
        .map(|(idx, spec)| {
            let mut missing = 0usize;
            match spec.kind {
                ColumnKind::Numeric => {
                    let mut count = 0usize;
                    let mut sum = 0.0;
                    let mut min = f64::INFINITY;
                    let mut max = f64::NEG_INFINITY;
                    for row in table.rows() {
                        match &row[idx] {
                            Cell::Number(v) => {
                                count += 1;
                                sum += v;
                                min = min.min(*v);
                                max = max.max(*v);
                            }
                            Cell::Missing => missing += 1,
                            Cell::Token(_) => unreachable!("table invariant"),
                        }
                    }
                    let moments = if count > 0 {
                        let mean = sum / count as f64;
                        let mut sq = 0.0;
                        for row in table.rows() {
                            if let Cell::Number(v) = &row[idx] {
                                let d = v - mean;
                                sq += d * d;
                            }
                        }
                        Some(NumericMoments {
                            mean,
                            std: (sq / count as f64).sqrt(),
                            min,
                            max,
                        })
                    } else {
                        None
                    };
                    ColumnSummary {
                        name: spec.name.clone(),
                        count,
                        missing,
                        detail: ColumnDetail::Numeric(moments),
                    }
                }
                ColumnKind::Categorical => {
                    let mut freqs: BTreeMap<String, usize> = BTreeMap::new();
                    let mut count = 0usize;
                    for row in table.rows() {
                        match &row[idx] {
                            Cell::Token(t) => {
                                count += 1;
                                *freqs.entry(t.clone()).or_insert(0) += 1;
                            }
                            Cell::Missing => missing += 1,
                            Cell::Number(_) => unreachable!("table invariant"),
                        }
                    }
                    ColumnSummary {
                        name: spec.name.clone(),
                        count,
                        missing,
                        detail: ColumnDetail::Categorical(freqs),
                    }
                }
            }
        })
        .collect();
    SummaryStats { columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::schema::{ColumnRole, ColumnSpec, Schema};

    fn one_col_table(cells: Vec<Cell>) -> Table {
        let schema = Schema::new(vec![
            ColumnSpec::new("v", ColumnKind::Numeric, ColumnRole::Feature, ""),
            ColumnSpec::new("t", ColumnKind::Numeric, ColumnRole::Target, ""),
        ])
        .unwrap();
        let rows = cells
            .into_iter()
            .map(|c| vec![c, Cell::Number(0.0)])
            .collect();
        Table::new(schema, rows).unwrap()
    }

    #[test]
    fn two_point_mean() {
        let stats = summarize(&one_col_table(vec![Cell::Number(2.0), Cell::Number(4.0)]));
        let col = stats.column("v").unwrap();
        assert_eq!(col.count, 2);
        match &col.detail {
            ColumnDetail::Numeric(Some(m)) => {
                assert_eq!(m.mean, 3.0);
                assert_eq!(m.min, 2.0);
                assert_eq!(m.max, 4.0);
            }
            _ => panic!("expected numeric moments"),
        }
    }

    #[test]
    fn constant_column_with_missing() {
        let stats = summarize(&one_col_table(vec![
            Cell::Number(5.0),
            Cell::Missing,
            Cell::Number(5.0),
        ]));
        let col = stats.column("v").unwrap();
        assert_eq!(col.count, 2);
        assert_eq!(col.missing, 1);
        match &col.detail {
            ColumnDetail::Numeric(Some(m)) => {
                assert_eq!(m.mean, 5.0);
                assert_eq!(m.std, 0.0);
            }
            _ => panic!("expected numeric moments"),
        }
    }

    #[test]
    fn all_missing_column_has_no_moments() {
        let stats = summarize(&one_col_table(vec![Cell::Missing, Cell::Missing]));
        let col = stats.column("v").unwrap();
        assert_eq!(col.count, 0);
        assert_eq!(col.missing, 2);
        assert!(matches!(col.detail, ColumnDetail::Numeric(None)));
    }

    #[test]
    fn empty_table_all_zero_counts() {
        let stats = summarize(&one_col_table(vec![]));
        assert!(stats.columns.iter().all(|c| c.count == 0 && c.missing == 0));
    }

    #[test]
    fn permutation_invariant_over_rows() {
        let forward = one_col_table(vec![
            Cell::Number(1.0),
            Cell::Missing,
            Cell::Number(7.0),
            Cell::Number(-2.0),
        ]);
        let shuffled = one_col_table(vec![
            Cell::Number(7.0),
            Cell::Number(-2.0),
            Cell::Missing,
            Cell::Number(1.0),
        ]);
        assert_eq!(summarize(&forward), summarize(&shuffled));
        // Purity: rerunning yields identical output.
        assert_eq!(summarize(&forward), summarize(&forward));
    }

    #[test]
    fn min_le_mean_le_max() {
        let stats = summarize(&one_col_table(vec![
            Cell::Number(-3.0),
            Cell::Number(10.0),
            Cell::Number(4.5),
        ]));
        if let ColumnDetail::Numeric(Some(m)) = &stats.column("v").unwrap().detail {
            assert!(m.min <= m.mean && m.mean <= m.max);
        } else {
            panic!();
        }
    }
}
