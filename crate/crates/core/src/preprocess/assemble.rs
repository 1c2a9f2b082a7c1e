//! Feature assembly: turn a fully preprocessed table into dense matrices.

use crate::data::{Cell, ColumnKind, Features, LabeledMatrix, Schema, Table};
use crate::error::{Error, Result};

/// Indices of the feature columns to assemble, in schema order.
///
/// With `restrict_to = None` every role=feature column is used. A restriction
/// list matches either the current column name or, for encoded columns, the
/// pre-encoding name (`thal` selects `thal_index`).
pub fn feature_columns(schema: &Schema, restrict_to: Option<&[String]>) -> Result<Vec<usize>> {
    let all = schema.feature_indices();
    let Some(wanted) = restrict_to else {
        return Ok(all);
    };
    for name in wanted {
        let found = all.iter().any(|&i| {
            let col = schema.column(i).name.as_str();
            col == name || col == format!("{name}_index")
        });
        if !found {
            return Err(Error::UnknownColumn(name.clone()));
        }
    }
    Ok(all
        .into_iter()
        .filter(|&i| {
            let col = schema.column(i).name.as_str();
            wanted
                .iter()
                .any(|name| col == name || col == format!("{name}_index"))
        })
        .collect())
}

/// Build the bare feature matrix (no labels). Every selected column must be
/// numeric and dense.
pub fn assemble_features(
    table: &Table,
    restrict_to: Option<&[String]>,
) -> Result<(Features, Vec<String>)> {
    let cols = feature_columns(table.schema(), restrict_to)?;
    for &idx in &cols {
        let col = table.schema().column(idx);
        if col.kind != ColumnKind::Numeric {
            return Err(Error::Assembly {
                column: col.name.clone(),
                row: 0,
                message: "feature column is still categorical; encode it first".into(),
            });
        }
    }
    let mut data = Vec::with_capacity(table.n_rows() * cols.len());
    for (r, row) in table.rows().iter().enumerate() {
        for &idx in &cols {
            match &row[idx] {
                Cell::Number(v) => data.push(*v),
                Cell::Missing => {
                    return Err(Error::Assembly {
                        column: table.schema().column(idx).name.clone(),
                        row: r,
                        message: "missing cell; impute before assembling".into(),
                    })
                }
                Cell::Token(_) => unreachable!("kind checked above"),
            }
        }
    }
    let names = cols
        .iter()
        .map(|&i| table.schema().column(i).name.clone())
        .collect();
    Ok((Features::new(data, table.n_rows(), cols.len())?, names))
}

/// Assemble features and the binary target into a [`LabeledMatrix`].
///
/// Identifier and excluded columns are dropped; the target must be numeric
/// 0/1 in every row.
pub fn assemble(table: &Table) -> Result<LabeledMatrix> {
    assemble_restricted(table, None)
}

/// [`assemble`] with an optional feature subset.
pub fn assemble_restricted(
    table: &Table,
    restrict_to: Option<&[String]>,
) -> Result<LabeledMatrix> {
    let (features, names) = assemble_features(table, restrict_to)?;
    let target_idx = table.schema().target_index();
    let target_name = &table.schema().target().name;
    let mut labels = Vec::with_capacity(table.n_rows());
    for (r, row) in table.rows().iter().enumerate() {
        match &row[target_idx] {
            Cell::Number(v) if *v == 0.0 => labels.push(0),
            Cell::Number(v) if *v == 1.0 => labels.push(1),
            Cell::Number(v) => {
                return Err(Error::Assembly {
                    column: target_name.clone(),
                    row: r,
                    message: format!("target value {v} is not binary"),
                })
            }
            Cell::Missing => {
                return Err(Error::Assembly {
                    column: target_name.clone(),
                    row: r,
                    message: "missing target cell".into(),
                })
            }
            Cell::Token(t) => {
                return Err(Error::Assembly {
                    column: target_name.clone(),
                    row: r,
                    message: format!("target token `{t}`; binarize before assembling"),
                })
            }
        }
    }
    LabeledMatrix::new(features, labels, names)
}
