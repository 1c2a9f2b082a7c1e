//! Non-destructive data validation: null counts, target binarity, and
//! plausibility flags.

use crate::data::{Cell, Table};

/// A (column, min, max) plausibility rule. Violations are flagged, never
/// auto-corrected.
#[derive(Debug, Clone, PartialEq)]
pub struct PlausibilityRule {
    pub column: String,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImplausibleFlag {
    pub column: String,
    pub row: usize,
    pub value: f64,
    /// The rule violated, rendered as `column in [min, max]`.
    pub rule: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    /// (column name, missing-cell count), in schema order.
    pub null_counts: Vec<(String, usize)>,
    pub non_binary_target_rows: usize,
    pub implausible: Vec<ImplausibleFlag>,
}

impl ValidationReport {
    pub fn total_nulls(&self) -> usize {
        self.null_counts.iter().map(|(_, n)| n).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.total_nulls() == 0 && self.non_binary_target_rows == 0 && self.implausible.is_empty()
    }
}

/// Scan a table and report nulls, non-binary target rows, and plausibility
/// violations. Unknown rule columns are skipped (they may have been dropped
/// by an earlier step).
pub fn validate(table: &Table, rules: &[PlausibilityRule]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let target = table.schema().target_index();

    for (idx, col) in table.schema().columns().iter().enumerate() {
        let nulls = table.rows().iter().filter(|r| r[idx].is_missing()).count();
        report.null_counts.push((col.name.clone(), nulls));
    }

    for row in table.rows() {
        match &row[target] {
            Cell::Number(v) if *v == 0.0 || *v == 1.0 => {}
            Cell::Missing => {} // already counted as a null
            _ => report.non_binary_target_rows += 1,
        }
    }

    for rule in rules {
        let Ok(idx) = table.schema().index_of(&rule.column) else {
            continue;
        };
        for (r, row) in table.rows().iter().enumerate() {
            if let Cell::Number(v) = &row[idx] {
                if *v < rule.min || *v > rule.max {
                    report.implausible.push(ImplausibleFlag {
                        column: rule.column.clone(),
                        row: r,
                        value: *v,
                        rule: format!("{} in [{}, {}]", rule.column, rule.min, rule.max),
                    });
                }
            }
        }
    }
    report
}
