//! Per-disease preprocessing: imputation, deduplication, null-column
//! dropping, categorical encoding, target binarization, validation, feature
//! assembly, and stratified splitting.
//!
//! Fit operations (imputers, encoders) are single-threaded; apply operations
//! are pure row-wise maps. By default transforms are fitted on the full
//! pre-split table, mirroring the upstream methodology's order of operations;
//! see the pipeline config's `fit_on_train_only` flag for the
//! leakage-avoiding variant.

mod assemble;
mod clean;
mod encode;
mod impute;
mod split;
mod validate;

pub use assemble::{assemble, assemble_features, assemble_restricted, feature_columns};
pub use clean::{binarize_target, dedupe, drop_null_columns, NullDropOutcome};
pub use encode::{apply_encoder, fit_encoder, ColumnEncoder, EncodedTable, EncoderMap};
pub use impute::{apply_imputer, fit_imputer, FillValue, FittedImputer, ImputePolicy, ImputeRule};
pub use split::{split, split_indices, SplitSpec};
pub use validate::{validate, ImplausibleFlag, PlausibilityRule, ValidationReport};
