//! Missing-value imputation: fit fill values on a table, apply them later.

use std::collections::BTreeMap;

use crate::data::{Cell, ColumnKind, Table};
use crate::error::{Error, Result};

/// Per-column imputation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImputeRule {
    /// Fill with 0 (numeric columns only).
    Zero,
    /// Fill with the column mean over non-missing values (numeric only).
    Mean,
    /// Fill with the most frequent token, ties broken by the
    /// lexicographically smallest (categorical only).
    Mode,
    /// Leave missing cells untouched.
    None,
}

impl ImputeRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ImputeRule::Zero => "zero",
            ImputeRule::Mean => "mean",
            ImputeRule::Mode => "mode",
            ImputeRule::None => "none",
        }
    }
}

impl std::str::FromStr for ImputeRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(ImputeRule::Zero),
            "mean" => Ok(ImputeRule::Mean),
            "mode" => Ok(ImputeRule::Mode),
            "none" => Ok(ImputeRule::None),
            other => Err(Error::config(
                "impute",
                format!("unknown impute rule `{other}` (expected zero, mean, mode, or none)"),
            )),
        }
    }
}

/// Rules per column name. Columns not listed default to [`ImputeRule::None`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImputePolicy {
    pub rules: BTreeMap<String, ImputeRule>,
}

impl ImputePolicy {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, column: impl Into<String>, rule: ImputeRule) -> Self {
        self.rules.insert(column.into(), rule);
        self
    }

    /// Apply `numeric_rule` to every numeric column and `categorical_rule` to
    /// every categorical column of `schema`, excluding the target.
    pub fn bulk(
        schema: &crate::data::Schema,
        numeric_rule: ImputeRule,
        categorical_rule: ImputeRule,
    ) -> Self {
        let mut rules = BTreeMap::new();
        let target = schema.target_index();
        for (i, col) in schema.columns().iter().enumerate() {
            if i == target {
                continue;
            }
            let rule = match col.kind {
                ColumnKind::Numeric => numeric_rule,
                ColumnKind::Categorical => categorical_rule,
            };
            if rule != ImputeRule::None {
                rules.insert(col.name.clone(), rule);
            }
        }
        ImputePolicy { rules }
    }

    /// Check rule/kind consistency against a schema. Returns the offending
    /// column in the error.
    pub fn check(&self, schema: &crate::data::Schema) -> Result<()> {
        for (name, rule) in &self.rules {
            let kind = schema.column(schema.index_of(name)?).kind;
            let ok = match rule {
                ImputeRule::Zero | ImputeRule::Mean => kind == ColumnKind::Numeric,
                ImputeRule::Mode => kind == ColumnKind::Categorical,
                ImputeRule::None => true,
            };
            if !ok {
                return Err(Error::config(
                    format!("impute.{name}"),
                    format!(
                        "{} imputation requires a {} column ({name} is {})",
                        rule.as_str(),
                        if *rule == ImputeRule::Mode { "categorical" } else { "numeric" },
                        kind.as_str()
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// A learned fill value.
#[derive(Debug, Clone, PartialEq)]
pub enum FillValue {
    Number(f64),
    Token(String),
}

/// Fitted imputer: one fill value per covered column, plus the policy it was
/// fitted under. Reused verbatim at prediction time.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedImputer {
    /// (column name, rule, fill), in schema order at fit time.
    pub fills: Vec<(String, ImputeRule, FillValue)>,
}

impl FittedImputer {
    pub fn fill_for(&self, column: &str) -> Option<&FillValue> {
        self.fills
            .iter()
            .find(|(name, _, _)| name == column)
            .map(|(_, _, fill)| fill)
    }
}

/// Learn fill values from `table` under `policy`.
///
/// Mean fills are the arithmetic mean of non-missing values; mode fills are
/// the most frequent token with lexicographic tie-breaking; zero fills are
/// the constant 0. A mean or mode rule on an all-missing column is an error.
pub fn fit_imputer(table: &Table, policy: &ImputePolicy) -> Result<FittedImputer> {
    policy.check(table.schema())?;
    let mut fills = Vec::new();
    for (idx, col) in table.schema().columns().iter().enumerate() {
        let rule = match policy.rules.get(&col.name) {
            Some(rule) if *rule != ImputeRule::None => *rule,
            _ => continue,
        };
        let fill = match rule {
            ImputeRule::Zero => FillValue::Number(0.0),
            ImputeRule::Mean => {
                let mut sum = 0.0;
                let mut count = 0usize;
                for row in table.rows() {
                    if let Cell::Number(v) = &row[idx] {
                        sum += v;
                        count += 1;
                    }
                }
                if count == 0 {
                    return Err(Error::UnfittableColumn(col.name.clone(), "mean".into()));
                }
                FillValue::Number(sum / count as f64)
            }
            ImputeRule::Mode => {
                let mut freqs: BTreeMap<&str, usize> = BTreeMap::new();
                for row in table.rows() {
                    if let Cell::Token(t) = &row[idx] {
                        *freqs.entry(t).or_insert(0) += 1;
                    }
                }
                // BTreeMap iterates tokens in ascending order, so keeping a
                // strictly-greater max yields the lexicographically smallest
                // token among ties.
                let mode = freqs
                    .iter()
                    .fold(None::<(&str, usize)>, |best, (tok, n)| match best {
                        Some((_, bn)) if *n <= bn => best,
                        _ => Some((tok, *n)),
                    });
                match mode {
                    Some((tok, _)) => FillValue::Token(tok.to_string()),
                    None => {
                        return Err(Error::UnfittableColumn(col.name.clone(), "mode".into()))
                    }
                }
            }
            ImputeRule::None => unreachable!(),
        };
        fills.push((col.name.clone(), rule, fill));
    }
    Ok(FittedImputer { fills })
}

/// Fill missing cells using a fitted imputer. Non-missing cells are
/// unchanged; columns without a rule keep their missing cells.
pub fn apply_imputer(table: &Table, imputer: &FittedImputer) -> Result<Table> {
    let mut fill_by_index: Vec<Option<&FillValue>> = vec![None; table.n_cols()];
    for (name, _, fill) in &imputer.fills {
        let idx = table
            .schema()
            .index_of(name)
            .map_err(|_| Error::Schema(format!("imputer column `{name}` not in table")))?;
        fill_by_index[idx] = Some(fill);
    }
    let rows = table
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(idx, cell)| match (cell, fill_by_index[idx]) {
                    (Cell::Missing, Some(FillValue::Number(v))) => Cell::Number(*v),
                    (Cell::Missing, Some(FillValue::Token(t))) => Cell::Token(t.clone()),
                    _ => cell.clone(),
                })
                .collect()
        })
        .collect();
    Ok(table.with_rows(rows))
}
