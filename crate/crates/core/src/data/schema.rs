//! Column schemas for tabular datasets.

use crate::error::{Error, Result};

/// Cell type of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

impl ColumnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnKind::Numeric => "numeric",
            ColumnKind::Categorical => "categorical",
        }
    }
}

/// How a column participates in modeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Feature,
    Target,
    /// Row identifiers (e.g. patient ids); never assembled into features.
    Identifier,
    /// Present in the data but deliberately left out of the feature set.
    Excluded,
}

impl ColumnRole {
    pub fn as_str(self) -> &'static str {
        match self {
            ColumnRole::Feature => "feature",
            ColumnRole::Target => "target",
            ColumnRole::Identifier => "identifier",
            ColumnRole::Excluded => "excluded",
        }
    }
}

/// One column: name, cell kind, modeling role, and a free-text description
/// (units included where they matter).
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: ColumnKind,
    pub role: ColumnRole,
    pub description: String,
}

impl ColumnSpec {
    pub fn new(
        name: impl Into<String>,
        kind: ColumnKind,
        role: ColumnRole,
        description: impl Into<String>,
    ) -> Self {
        ColumnSpec {
            name: name.into(),
            kind,
            role,
            description: description.into(),
        }
    }
}

/// An ordered list of column specs with unique names and exactly one target.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    columns: Vec<ColumnSpec>,
}

impl Schema {
    pub fn new(columns: Vec<ColumnSpec>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for col in &columns {
            if col.name.is_empty() || col.name.contains(|c: char| c.is_whitespace() || c == ',') {
                return Err(Error::Schema(format!(
                    "column name `{}` must be non-empty and free of whitespace and commas",
                    col.name
                )));
            }
            if !seen.insert(col.name.as_str()) {
                return Err(Error::Schema(format!("duplicate column name `{}`", col.name)));
            }
        }
        let targets = columns
            .iter()
            .filter(|c| c.role == ColumnRole::Target)
            .count();
        if targets != 1 {
            return Err(Error::Schema(format!(
                "schema must have exactly one target column, found {targets}"
            )));
        }
        Ok(Schema { columns })
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column(&self, index: usize) -> &ColumnSpec {
        &self.columns[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn target_index(&self) -> usize {
        self.columns
            .iter()
            .position(|c| c.role == ColumnRole::Target)
            .expect("schema invariant: one target")
    }

    pub fn target(&self) -> &ColumnSpec {
        self.column(self.target_index())
    }

    /// Indices of role=feature columns, in schema order.
    pub fn feature_indices(&self) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == ColumnRole::Feature)
            .map(|(i, _)| i)
            .collect()
    }

    /// Rebuild the schema with one column replaced. Re-validates invariants.
    pub fn with_column_replaced(&self, index: usize, spec: ColumnSpec) -> Result<Schema> {
        let mut columns = self.columns.clone();
        columns[index] = spec;
        Schema::new(columns)
    }

    /// Rebuild the schema keeping only the columns at `keep` (in the given order).
    pub fn project(&self, keep: &[usize]) -> Result<Schema> {
        Schema::new(keep.iter().map(|&i| self.columns[i].clone()).collect())
    }

    /// The human-readable export format: one `name,kind,role` line per column.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for col in &self.columns {
            out.push_str(&format!(
                "{},{},{}\n",
                col.name,
                col.kind.as_str(),
                col.role.as_str()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(name: &str, kind: ColumnKind, role: ColumnRole) -> ColumnSpec {
        ColumnSpec::new(name, kind, role, "")
    }

    #[test]
    fn exactly_one_target_required() {
        let err = Schema::new(vec![spec("a", ColumnKind::Numeric, ColumnRole::Feature)]);
        assert!(err.is_err());
        let err = Schema::new(vec![
            spec("a", ColumnKind::Numeric, ColumnRole::Target),
            spec("b", ColumnKind::Numeric, ColumnRole::Target),
        ]);
        assert!(err.is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Schema::new(vec![
            spec("a", ColumnKind::Numeric, ColumnRole::Feature),
            spec("a", ColumnKind::Numeric, ColumnRole::Target),
        ]);
        assert!(matches!(err, Err(Error::Schema(_))));
    }

    #[test]
    fn lookup_and_export() {
        let schema = Schema::new(vec![
            spec("age", ColumnKind::Numeric, ColumnRole::Feature),
            spec("sex", ColumnKind::Categorical, ColumnRole::Feature),
            spec("target", ColumnKind::Numeric, ColumnRole::Target),
        ])
        .unwrap();
        assert_eq!(schema.index_of("sex").unwrap(), 1);
        assert!(matches!(
            schema.index_of("nope"),
            Err(Error::UnknownColumn(n)) if n == "nope"
        ));
        assert_eq!(schema.target_index(), 2);
        assert_eq!(schema.feature_indices(), vec![0, 1]);
        assert_eq!(
            schema.export(),
            "age,numeric,feature\nsex,categorical,feature\ntarget,numeric,target\n"
        );
    }
}
