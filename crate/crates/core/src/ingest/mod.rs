//! Dataset ingestion: built-in disease schemas, CSV parsing against a
//! schema, and deterministic synthetic data generation.

mod csv;
mod diseases;
mod synth;

pub use csv::{load_disease, parse_csv, serialize_csv, CsvOptions, ParsedCsv};
pub use diseases::{builtin_schema, default_positive_rate, thyroid_positive_labels, DiseaseId};
pub use synth::{synth_schema, synthesize, SynthSpec};
