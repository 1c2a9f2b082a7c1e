//! CSV ingestion and serialization against a fixed schema.

use std::io::Read;
use std::path::Path;

use crate::data::{Cell, ColumnKind, Schema, Table};
use crate::error::{Error, Result};
use crate::ingest::diseases::{builtin_schema, DiseaseId};

/// Field tokens normalized to the missing marker, matched case-insensitively
/// after trimming.
const MISSING_TOKENS: [&str; 4] = ["", "?", "na", "null"];

#[derive(Debug, Clone)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// Accept input whose header lacks the target column (prediction-time
    /// data); its cells are filled with the missing marker.
    pub allow_missing_target: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            delimiter: b',',
            has_header: true,
            allow_missing_target: false,
        }
    }
}

/// Parse result: the table plus the names of any input columns that are not
/// in the schema (ignored, surfaced as a warning by callers).
#[derive(Debug)]
pub struct ParsedCsv {
    pub table: Table,
    pub ignored_columns: Vec<String>,
}

fn coerce(field: &str, kind: ColumnKind) -> Cell {
    let trimmed = field.trim();
    if MISSING_TOKENS
        .iter()
        .any(|t| trimmed.eq_ignore_ascii_case(t))
    {
        return Cell::Missing;
    }
    match kind {
        ColumnKind::Numeric => match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => Cell::Number(v),
            _ => Cell::Missing,
        },
        ColumnKind::Categorical => Cell::Token(trimmed.to_string()),
    }
}

/// Parse CSV text into a table conforming to `schema`.
///
/// With a header, schema columns are located by name and every schema column
/// must be present (except the target when `allow_missing_target` is set);
/// extra input columns are ignored and reported. Without a header, fields
/// are positional and each record must have exactly `schema.len()` fields.
pub fn parse_csv(input: impl Read, schema: &Schema, options: &CsvOptions) -> Result<ParsedCsv> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true)
        .from_reader(input);

    // Schema column index -> CSV field index; None means fill with Missing.
    let mut mapping: Vec<Option<usize>> = Vec::with_capacity(schema.len());
    let mut ignored_columns = Vec::new();

    let expected_arity = if options.has_header {
        let headers = reader
            .headers()
            .map_err(|e| Error::Parse {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let names: Vec<String> = headers.iter().map(|h| h.trim().to_string()).collect();
        let target_idx = schema.target_index();
        for (i, col) in schema.columns().iter().enumerate() {
            match names.iter().position(|n| n == &col.name) {
                Some(pos) => mapping.push(Some(pos)),
                None if i == target_idx && options.allow_missing_target => mapping.push(None),
                None => return Err(Error::MissingHeaderColumn(col.name.clone())),
            }
        }
        for name in &names {
            if schema.index_of(name).is_err() {
                ignored_columns.push(name.clone());
            }
        }
        names.len()
    } else {
        mapping.extend((0..schema.len()).map(Some));
        schema.len()
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, csv::Position::line),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, csv::Position::line);
        if record.len() != expected_arity {
            return Err(Error::Arity {
                line,
                expected: expected_arity,
                actual: record.len(),
            });
        }
        let mut row = Vec::with_capacity(schema.len());
        for (i, col) in schema.columns().iter().enumerate() {
            match mapping[i] {
                Some(pos) => row.push(coerce(&record[pos], col.kind)),
                None => row.push(Cell::Missing),
            }
        }
        rows.push(row);
    }

    let table = Table::new(schema.clone(), rows)?;
    Ok(ParsedCsv {
        table,
        ignored_columns,
    })
}

/// Serialize a table to CSV: header row, numbers in shortest round-trip
/// form, missing cells as empty fields.
pub fn serialize_csv(table: &Table) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer
        .write_record(table.schema().columns().iter().map(|c| c.name.as_str()))
        .map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
    for row in table.rows() {
        let fields: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Number(v) => format!("{v}"),
                Cell::Token(t) => t.clone(),
                Cell::Missing => String::new(),
            })
            .collect();
        writer.write_record(&fields).map_err(|e| Error::Parse {
            line: 0,
            message: e.to_string(),
        })?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Load a disease CSV file against its built-in schema.
pub fn load_disease(id: DiseaseId, path: &Path) -> Result<ParsedCsv> {
    let file = std::fs::File::open(path)?;
    parse_csv(file, &builtin_schema(id), &CsvOptions::default())
}
