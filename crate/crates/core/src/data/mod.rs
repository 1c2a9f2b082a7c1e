//! The in-memory tabular data model: schemas, cell-level tables, summary
//! statistics, and the dense matrices handed to models.
//!
//! Tables and statistics are immutable after construction and safe to share
//! read-only across threads.

mod matrix;
mod schema;
mod stats;
mod table;

pub use matrix::{Features, LabeledMatrix};
pub use schema::{ColumnKind, ColumnRole, ColumnSpec, Schema};
pub use stats::{summarize, ColumnDetail, ColumnSummary, NumericMoments, SummaryStats};
pub use table::{Cell, Table};
