//! Tabular clinical risk classification toolkit.
//!
//! The crate covers the whole experiment path for binary disease prediction
//! on mixed-type tabular data:
//!
//! - [`data`]: schemas, cell-level tables, summary statistics, dense matrices;
//! - [`ingest`]: built-in disease schemas, CSV parsing, synthetic generation;
//! - [`preprocess`]: imputation, deduplication, encoding, target
//!   binarization, validation, feature assembly, stratified splitting;
//! - [`model`]: six classifier families trained from scratch behind one
//!   scoring interface, with text-format persistence;
//! - [`eval`]: confusion matrices, threshold metrics, ROC curves, AUC, and
//!   threshold search;
//! - [`report`]: comparison tables, confusion grids, and SVG ROC plots;
//! - [`pipeline`]: declarative experiment configs, the four disease presets,
//!   and the train/predict runner;
//! - [`goldens`]: embedded reference confusion matrices with their expected
//!   metric rows, used as a self-check of the metric arithmetic.
//!
//! Every random choice derives from one master seed (see [`rng`]), so runs
//! are reproducible byte-for-byte regardless of worker count.

pub mod data;
pub mod error;
pub mod eval;
pub mod goldens;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod rng;

pub use data::{Cell, ColumnKind, ColumnRole, ColumnSpec, Features, LabeledMatrix, Schema, Table};
pub use error::{Error, Result};
pub use ingest::DiseaseId;
