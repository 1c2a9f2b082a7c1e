//! Shared fixtures for the benchmark suite.

use tabmed_core::data::LabeledMatrix;
use tabmed_core::ingest::{synthesize, DiseaseId, SynthSpec};
use tabmed_core::preprocess::assemble;
use tabmed_core::Table;

/// A synthetic heart table of the given size, fixed seed.
pub fn heart_table(n_rows: usize) -> Table {
    let spec = SynthSpec::new(n_rows, 7, 1.0, 0.5).expect("valid spec");
    synthesize(DiseaseId::Heart, &spec).expect("synthesis succeeds")
}

/// The same table taken through encoding and assembly, ready for training.
pub fn heart_matrix(n_rows: usize) -> LabeledMatrix {
    let table = heart_table(n_rows);
    let encode: Vec<String> = vec!["thal".to_string()];
    let encoder = tabmed_core::preprocess::fit_encoder(&table, &encode).expect("encoder fits");
    let encoded = tabmed_core::preprocess::apply_encoder(&table, &encoder).expect("encodes");
    assemble(&encoded.table).expect("assembles")
}
