//! Subcommand definitions and dispatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use tabmed_core::data::summarize;
use tabmed_core::error::{Error, Result};
use tabmed_core::goldens::{reference_rows, run_goldens};
use tabmed_core::ingest::{
    builtin_schema, default_positive_rate, parse_csv, serialize_csv, synthesize, CsvOptions,
    DiseaseId, SynthSpec,
};
use tabmed_core::pipeline::{load_bundle, load_results, read_config_file, run_experiment};
use tabmed_core::report::{plot_roc, render_comparison, ComparisonReport, TableFormat};

/// Environment variable naming the base directory for run outputs when the
/// config does not set one.
pub const OUT_DIR_ENV: &str = "TABMED_OUT";

#[derive(Parser)]
#[command(
    name = "tabmed",
    version,
    about = "Tabular disease-risk classification: schemas, synthetic data, training, prediction"
)]
pub struct Cli {
    /// Worker threads for parallel training (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print a disease's built-in schema, one `name,kind,role` line per column.
    Schema {
        /// One of: heart, thyroid, diabetes, ckd.
        disease: String,
    },
    /// Generate a synthetic dataset and write it as CSV.
    Synth {
        /// One of: heart, thyroid, diabetes, ckd.
        disease: String,
        /// Number of data rows.
        #[arg(long)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Class-separation strength in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        signal: f64,
        /// Positive-class share in (0, 1); defaults per disease.
        #[arg(long)]
        positive_rate: Option<f64>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Print the generated table's summary statistics to stderr.
        #[arg(long)]
        summary: bool,
    },
    /// Run an experiment described by a config file: preprocess, split,
    /// train every configured model, evaluate, and write reports + bundles.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a CSV with a trained pipeline bundle; writes `row,score,predicted`.
    Predict {
        /// Path to a `bundle.tabmed` written by `train`.
        #[arg(long)]
        model: PathBuf,
        /// Input CSV conforming to the bundle's schema (the target column
        /// may be absent; missing values are allowed).
        #[arg(long)]
        input: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute metrics from the embedded reference confusion matrices and
    /// compare against their published rows. Exit code 3 on any failure.
    Goldens {
        /// Perturb every expected value first (self-test: everything must FAIL).
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Re-render reports from a completed run directory without retraining.
    Report {
        /// A run directory written by `train`.
        #[arg(long)]
        run: PathBuf,
        /// text or csv.
        #[arg(long, default_value = "text")]
        format: String,
        /// Also write roc.svg re-rendered from the stored curves.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Print published reference metrics beside the run's rows
        /// (one of: heart, thyroid, diabetes, ckd).
        #[arg(long)]
        reference: Option<String>,
    },
}

pub enum CommandOutcome {
    Success,
    GoldensFailed,
}

pub fn run(cli: Cli) -> Result<CommandOutcome> {
    match cli.command {
        Command::Schema { disease } => {
            let id: DiseaseId = disease.parse()?;
            print!("{}", builtin_schema(id).export());
            Ok(CommandOutcome::Success)
        }
        Command::Synth {
            disease,
            rows,
            seed,
            signal,
            positive_rate,
            out,
            summary,
        } => {
            let id: DiseaseId = disease.parse()?;
            let rate = positive_rate.unwrap_or_else(|| default_positive_rate(id));
            let spec = SynthSpec::new(rows, seed, signal, rate)?;
            let table = synthesize(id, &spec)?;
            if summary {
                eprint!("{}", render_summary(&table));
            }
            std::fs::write(&out, serialize_csv(&table)?)?;
            eprintln!("wrote {} rows to {}", table.n_rows(), out.display());
            Ok(CommandOutcome::Success)
        }
        Command::Train { config, seed, out } => {
            let mut pipeline = read_config_file(&config)?;
            if let Some(seed) = seed {
                pipeline.seed = seed;
            }
            if let Some(out) = out {
                pipeline.out_dir = out;
            } else if !config_sets_out(&config)? {
                if let Ok(base) = std::env::var(OUT_DIR_ENV) {
                    pipeline.out_dir = PathBuf::from(base).join(&pipeline.experiment);
                }
            }
            let run = run_experiment(&pipeline)?;
            for warning in &run.warnings {
                eprintln!("warning: {warning}");
            }
            print!("{}", render_comparison(&run.report, TableFormat::Text));
            eprintln!("artifacts written to {}", pipeline.out_dir.display());
            Ok(CommandOutcome::Success)
        }
        Command::Predict { model, input, out } => {
            let bundle = load_bundle(&std::fs::read(&model)?)?;
            let file = std::fs::File::open(&input)?;
            let options = CsvOptions {
                allow_missing_target: true,
                ..CsvOptions::default()
            };
            let parsed = parse_csv(file, &bundle.schema, &options)?;
            for name in &parsed.ignored_columns {
                eprintln!("warning: ignored input column `{name}`");
            }
            let prediction = bundle.predict_table(&parsed.table)?;
            if prediction.unseen_count > 0 {
                eprintln!(
                    "warning: {} unseen categories mapped to reserved indices",
                    prediction.unseen_count
                );
            }
            let mut text = String::from("row,score,predicted\n");
            for (i, (score, predicted)) in prediction
                .scores
                .iter()
                .zip(&prediction.predicted)
                .enumerate()
            {
                let _ = writeln!(text, "{i},{score},{predicted}");
            }
            std::fs::write(&out, text)?;
            eprintln!(
                "scored {} rows with threshold {} ({})",
                prediction.scores.len(),
                bundle.threshold.threshold,
                bundle.threshold.criterion.as_str()
            );
            Ok(CommandOutcome::Success)
        }
        Command::Goldens { perturb } => {
            let results = run_goldens(perturb);
            let mut failures = 0usize;
            for r in &results {
                if r.passed {
                    println!("PASS {} = {:.4} (expected {:.4} ± {})", r.name, r.actual, r.expected, r.tolerance);
                } else {
                    failures += 1;
                    println!(
                        "FAIL {} = {:.6}, expected {:.6} ± {} (diff {:+.6})",
                        r.name,
                        r.actual,
                        r.expected,
                        r.tolerance,
                        r.actual - r.expected
                    );
                }
            }
            println!("{} checks, {} failures", results.len(), failures);
            if failures > 0 {
                Ok(CommandOutcome::GoldensFailed)
            } else {
                Ok(CommandOutcome::Success)
            }
        }
        Command::Report {
            run,
            format,
            svg,
            reference,
        } => {
            let (report, curves) = load_results(&run)?;
            match format.as_str() {
                "text" => print!("{}", render_comparison(&report, TableFormat::Text)),
                "csv" => print!("{}", render_comparison(&report, TableFormat::Csv)),
                other => {
                    return Err(Error::config(
                        "format",
                        format!("expected text or csv, got `{other}`"),
                    ))
                }
            }
            if let Some(path) = svg {
                std::fs::write(&path, plot_roc(&curves))?;
                eprintln!("wrote {}", path.display());
            }
            if let Some(disease) = reference {
                let id: DiseaseId = disease.parse()?;
                print!("{}", render_reference_deltas(&report, id));
            }
            Ok(CommandOutcome::Success)
        }
    }
}

/// Whether the config file itself sets an output directory.
fn config_sets_out(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    Ok(text.lines().any(|line| {
        let line = line.trim();
        !line.starts_with('#')
            && line
                .split_once('=')
                .is_some_and(|(k, _)| k.trim() == "out")
    }))
}

fn render_summary(table: &tabmed_core::Table) -> String {
    use tabmed_core::data::ColumnDetail;
    let stats = summarize(table);
    let mut out = String::new();
    for col in &stats.columns {
        match &col.detail {
            ColumnDetail::Numeric(Some(m)) => {
                let _ = writeln!(
                    out,
                    "{}: count {} missing {} mean {:.2} std {:.2} min {} max {}",
                    col.name, col.count, col.missing, m.mean, m.std, m.min, m.max
                );
            }
            ColumnDetail::Numeric(None) => {
                let _ = writeln!(out, "{}: no non-missing values", col.name);
            }
            ColumnDetail::Categorical(freqs) => {
                let cats: Vec<String> =
                    freqs.iter().map(|(t, n)| format!("{t}:{n}")).collect();
                let _ = writeln!(
                    out,
                    "{}: count {} missing {} [{}]",
                    col.name,
                    col.count,
                    col.missing,
                    cats.join(" ")
                );
            }
        }
    }
    out
}

/// Side-by-side table: the run's metrics, the published reference, and the
/// delta. Rows without a reference counterpart are skipped.
fn render_reference_deltas(report: &ComparisonReport, disease: DiseaseId) -> String {
    let references = reference_rows(disease);
    let mut out = String::new();
    let _ = writeln!(out, "\nreference comparison ({disease}):");
    let _ = writeln!(
        out,
        "{:<20} {:>10} {:>10} {:>10} {:>8}",
        "metric", "run", "reference", "delta", ""
    );
    for row in &report.rows {
        let Some(reference) = references.iter().find(|r| r.kind == row.kind) else {
            continue;
        };
        let mut line = |metric: &str, run_v: Option<f64>, ref_v: Option<f64>| {
            if let (Some(a), Some(b)) = (run_v, ref_v) {
                let _ = writeln!(
                    out,
                    "{:<20} {:>10.4} {:>10.4} {:>+10.4}",
                    format!("{} {metric}", row.kind.as_str()),
                    a,
                    b,
                    a - b
                );
            }
        };
        line("auc", Some(row.metrics.auc), reference.auc);
        line("precision", row.metrics.precision, reference.precision);
        line("recall", row.metrics.recall, reference.recall);
        line("f1", row.metrics.f1, reference.f1);
        line("accuracy", Some(row.metrics.accuracy), reference.accuracy);
    }
    out
}
