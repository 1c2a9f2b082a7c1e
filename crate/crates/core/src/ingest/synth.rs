//! Synthetic desk-scale datasets matching each disease's published summary
//! statistics, for testing and demonstration without the original files.

use crate::data::{Cell, ColumnKind, Schema, Table};
use crate::error::{Error, Result};
use crate::ingest::diseases::{builtin_schema, DiseaseId};
use crate::rng::{derive_seed, SplitMix64};

/// Parameters of one synthetic draw.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub n_rows: usize,
    pub seed: u64,
    /// In [0, 1]. Each numeric feature's class-conditional mean is shifted by
    /// `signal_strength x std` between the classes; 0 makes every feature
    /// independent of the label.
    pub signal_strength: f64,
    /// In (0, 1): probability a row is labeled positive.
    pub positive_rate: f64,
}

impl SynthSpec {
    pub fn new(n_rows: usize, seed: u64, signal_strength: f64, positive_rate: f64) -> Result<Self> {
        let spec = SynthSpec {
            n_rows,
            seed,
            signal_strength,
            positive_rate,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_rows == 0 {
            return Err(Error::config("synth.rows", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.signal_strength) {
            return Err(Error::config("synth.signal", "must lie in [0, 1]"));
        }
        if !(self.positive_rate > 0.0 && self.positive_rate < 1.0) {
            return Err(Error::config("synth.positive_rate", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// How one column is generated.
enum Gen {
    /// Truncated normal (resample until within bounds). `integer` rounds the
    /// draw. When the source summary states no std, callers use (max-min)/6.
    Normal {
        mean: f64,
        std: f64,
        min: f64,
        max: f64,
        integer: bool,
    },
    /// 0/1 numeric indicator with base rate `p`; the class shift moves `p` by
    /// signal x sqrt(p(1-p))/2 per class.
    Indicator { p: f64 },
    /// Label-independent token draw with the given weights.
    Tokens(&'static [(&'static str, f64)]),
    /// Sequential 1-based identifier.
    Serial,
    /// The binary label itself.
    Target,
}

fn normal(mean: f64, min: f64, max: f64) -> Gen {
    Gen::Normal {
        mean,
        std: (max - min) / 6.0,
        min,
        max,
        integer: false,
    }
}

fn normal_int(mean: f64, min: f64, max: f64) -> Gen {
    Gen::Normal {
        mean,
        std: (max - min) / 6.0,
        min,
        max,
        integer: true,
    }
}

fn normal_std(mean: f64, std: f64, min: f64, max: f64, integer: bool) -> Gen {
    Gen::Normal {
        mean,
        std,
        min,
        max,
        integer,
    }
}

const YES_NO: &[(&str, f64)] = &[("f", 0.85), ("t", 0.15)];
const MEASURED: &[(&str, f64)] = &[("t", 0.9), ("f", 0.1)];

fn profile(id: DiseaseId) -> Vec<Gen> {
    match id {
        DiseaseId::Heart => vec![
            normal_int(52.20, 20.0, 80.0),  // age
            Gen::Indicator { p: 0.68 },     // sex
            normal_int(1.0, 0.0, 3.0),      // cp
            normal_int(140.26, 94.0, 200.0), // trestbps
            normal_int(274.15, 0.0, 602.0), // chol
            Gen::Indicator { p: 0.15 },     // fbs
            normal_int(0.7, 0.0, 2.0),      // restecg
            normal_int(147.62, 71.0, 202.0), // thalach
            Gen::Indicator { p: 0.33 },     // exang
            normal(1.05, 0.0, 6.2),         // oldpeak
            normal_int(1.4, 0.0, 2.0),      // slope
            normal_int(0.75, 0.0, 4.0),     // ca
            Gen::Tokens(&[("3", 0.55), ("6", 0.12), ("7", 0.33)]), // thal
            Gen::Target,
        ],
        DiseaseId::Thyroid => vec![
            // The published age range for this dataset is anomalous; synthesis
            // uses a physiological profile instead.
            normal_std(50.0, 19.0, 1.0, 94.0, true), // age
            Gen::Tokens(&[("F", 0.66), ("M", 0.34)]), // sex
            Gen::Tokens(YES_NO),                     // on_thyroxine
            Gen::Tokens(YES_NO),                     // query_on_thyroxine
            Gen::Tokens(YES_NO),                     // on_antithyroid_meds
            Gen::Tokens(YES_NO),                     // sick
            Gen::Tokens(&[("f", 0.96), ("t", 0.04)]), // pregnant
            Gen::Tokens(YES_NO),                     // thyroid_surgery
            Gen::Tokens(YES_NO),                     // I131_treatment
            Gen::Tokens(YES_NO),                     // query_hypothyroid
            Gen::Tokens(YES_NO),                     // query_hyperthyroid
            Gen::Tokens(&[("f", 0.99), ("t", 0.01)]), // lithium
            Gen::Tokens(&[("f", 0.98), ("t", 0.02)]), // goitre
            Gen::Tokens(&[("f", 0.97), ("t", 0.03)]), // tumor
            Gen::Tokens(YES_NO),                     // psych
            Gen::Tokens(MEASURED),                   // TSH_measured
            normal(5.21, 0.005, 530.0),              // TSH
            Gen::Tokens(MEASURED),                   // T3_measured
            normal(1.97, 0.05, 18.0),                // T3
            Gen::Tokens(MEASURED),                   // TT4_measured
            normal(108.7, 2.0, 600.0),               // TT4
            Gen::Tokens(MEASURED),                   // T4U_measured
            normal(1.0, 0.3, 2.3),                   // T4U
            Gen::Tokens(MEASURED),                   // FTI_measured
            normal(113.64, 1.4, 881.0),              // FTI
            Gen::Tokens(&[("f", 0.9), ("t", 0.1)]),  // TBG_measured
            normal(29.87, 0.1, 200.0),               // TBG
            Gen::Tokens(&[
                ("other", 0.55),
                ("SVI", 0.2),
                ("SVHC", 0.15),
                ("STMW", 0.06),
                ("SVHD", 0.04),
            ]), // referral_source
            Gen::Target,
            Gen::Serial, // patient_id
        ],
        DiseaseId::Diabetes => vec![
            normal_int(41.9, 1.0, 80.0),  // age
            Gen::Tokens(&[("Female", 0.58), ("Male", 0.41), ("Other", 0.01)]), // gender
            normal_int(138.0, 80.0, 300.0), // glucose_level
            Gen::Indicator { p: 0.075 },  // hypertension
            Gen::Indicator { p: 0.04 },   // heart_disease
            normal(27.3, 10.0, 96.0),     // bmi
            Gen::Tokens(&[
                ("never", 0.35),
                ("No Info", 0.36),
                ("former", 0.09),
                ("current", 0.09),
                ("not current", 0.06),
                ("ever", 0.05),
            ]), // smoking_history
            Gen::Target,
        ],
        DiseaseId::Ckd => vec![
            Gen::Serial,                        // patient_id
            normal_int(55.0, 18.0, 90.0),       // age
            Gen::Tokens(&[("M", 0.52), ("F", 0.48)]), // sex
            Gen::Tokens(&[("group_a", 0.45), ("group_b", 0.3), ("group_c", 0.15), ("group_d", 0.1)]), // ethnicity
            normal_int(2.0, 1.0, 3.0),          // socioeconomic_status
            normal_int(2.5, 1.0, 4.0),          // education_level
            normal(27.0, 15.0, 45.0),           // bmi
            Gen::Indicator { p: 0.22 },         // smoking
            Gen::Indicator { p: 0.3 },          // alcohol_use
            normal_int(5.0, 0.0, 10.0),         // physical_activity
            normal_int(5.0, 0.0, 10.0),         // diet_quality
            normal_int(6.0, 0.0, 10.0),         // sleep_quality
            Gen::Indicator { p: 0.12 },         // family_kidney_disease
            Gen::Indicator { p: 0.35 },         // family_hypertension
            Gen::Indicator { p: 0.25 },         // family_diabetes
            normal_int(135.0, 90.0, 200.0),     // systolic_bp
            normal_int(82.0, 55.0, 120.0),      // diastolic_bp
            normal_int(110.0, 60.0, 300.0),     // blood_glucose
            normal(6.1, 4.0, 14.0),             // hba1c
            normal(1.4, 0.4, 10.0),             // serum_creatinine
            normal(70.0, 5.0, 130.0),           // gfr
            normal_int(1.0, 0.0, 4.0),          // urine_protein
            normal(140.0, 120.0, 155.0),        // serum_sodium
            normal(4.4, 2.5, 7.0),              // serum_potassium
            normal_int(195.0, 100.0, 350.0),    // cholesterol_total
            Gen::Indicator { p: 0.18 },         // acei_use
            Gen::Indicator { p: 0.15 },         // diuretic_use
            Gen::Indicator { p: 0.28 },         // statin_use
            Gen::Indicator { p: 0.2 },          // nsaid_use
            Gen::Indicator { p: 0.14 },         // antidiabetic_use
            Gen::Indicator { p: 0.1 },          // edema
            Gen::Indicator { p: 0.25 },         // fatigue
            Gen::Indicator { p: 0.12 },         // nausea
            Gen::Indicator { p: 0.15 },         // muscle_cramps
            Gen::Indicator { p: 0.1 },          // pruritus
            normal_int(6.0, 0.0, 10.0),         // quality_of_life
            Gen::Indicator { p: 0.05 },         // heavy_metal_exposure
            Gen::Indicator { p: 0.08 },         // chemical_exposure
            Gen::Indicator { p: 0.07 },         // water_quality
            normal_int(4.0, 0.0, 20.0),         // medical_visits
            normal_int(7.0, 0.0, 10.0),         // treatment_adherence
            normal_int(6.0, 0.0, 10.0),         // health_literacy
            Gen::Target,
        ],
    }
}

/// Schema of the synthesized table: the built-in schema with the target
/// column coerced to numeric, since synthetic labels are generated directly
/// in binary form.
pub fn synth_schema(id: DiseaseId) -> Schema {
    let schema = builtin_schema(id);
    let idx = schema.target_index();
    let mut target = schema.column(idx).clone();
    if target.kind == ColumnKind::Categorical {
        target.kind = ColumnKind::Numeric;
        target.description = format!("{} (binarized)", target.description);
        return schema
            .with_column_replaced(idx, target)
            .expect("target kind swap keeps schema valid");
    }
    schema
}

fn draw_truncated_normal(
    rng: &mut SplitMix64,
    mean: f64,
    std: f64,
    min: f64,
    max: f64,
    integer: bool,
) -> f64 {
    let mut v = mean;
    for _ in 0..1000 {
        v = mean + std * rng.next_standard_normal();
        if v >= min && v <= max {
            break;
        }
        v = f64::NAN;
    }
    if !v.is_finite() {
        v = mean.clamp(min, max);
    }
    if integer {
        v = v.round().clamp(min, max);
    }
    v
}

fn draw_token(rng: &mut SplitMix64, choices: &[(&str, f64)]) -> String {
    let total: f64 = choices.iter().map(|(_, w)| w).sum();
    let mut u = rng.next_f64() * total;
    for (token, w) in choices {
        if u < *w {
            return (*token).to_string();
        }
        u -= w;
    }
    choices.last().expect("non-empty vocabulary").0.to_string()
}

/// Generate a synthetic table for `id`. Deterministic for fixed `(id, spec)`.
pub fn synthesize(id: DiseaseId, spec: &SynthSpec) -> Result<Table> {
    spec.validate()?;
    let schema = synth_schema(id);
    let gens = profile(id);
    debug_assert_eq!(gens.len(), schema.len());

    let mut rng = SplitMix64::new(derive_seed(spec.seed, &format!("synth:{id}")));
    let half_shift = 0.5 * spec.signal_strength;

    let mut rows = Vec::with_capacity(spec.n_rows);
    for row_idx in 0..spec.n_rows {
        let label = rng.next_f64() < spec.positive_rate;
        let class_sign = if label { 1.0 } else { -1.0 };
        let mut row = Vec::with_capacity(schema.len());
        for gen in &gens {
            let cell = match gen {
                Gen::Normal {
                    mean,
                    std,
                    min,
                    max,
                    integer,
                } => {
                    let shifted = mean + class_sign * half_shift * std;
                    Cell::Number(draw_truncated_normal(
                        &mut rng, shifted, *std, *min, *max, *integer,
                    ))
                }
                Gen::Indicator { p } => {
                    let spread = half_shift * (p * (1.0 - p)).sqrt();
                    let p_adj = (p + class_sign * spread).clamp(0.01, 0.99);
                    Cell::Number(if rng.next_f64() < p_adj { 1.0 } else { 0.0 })
                }
                Gen::Tokens(choices) => Cell::Token(draw_token(&mut rng, choices)),
                Gen::Serial => Cell::Number((row_idx + 1) as f64),
                Gen::Target => Cell::Number(if label { 1.0 } else { 0.0 }),
            };
            row.push(cell);
        }
        rows.push(row);
    }
    Table::new(schema, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{summarize, ColumnDetail};

    #[test]
    fn deterministic_for_fixed_spec() {
        let spec = SynthSpec::new(200, 7, 0.5, 0.3).unwrap();
        let a = synthesize(DiseaseId::Thyroid, &spec).unwrap();
        let b = synthesize(DiseaseId::Thyroid, &spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn heart_age_matches_published_summary() {
        let spec = SynthSpec::new(10_000, 1, 0.0, 0.5).unwrap();
        let table = synthesize(DiseaseId::Heart, &spec).unwrap();
        let stats = summarize(&table);
        let age = stats.column("age").unwrap();
        match &age.detail {
            ColumnDetail::Numeric(Some(m)) => {
                assert!((m.mean - 52.20).abs() < 1.0, "mean {}", m.mean);
                assert!(m.min >= 20.0);
                assert!(m.max <= 80.0);
            }
            _ => panic!("age must be numeric"),
        }
    }

    #[test]
    fn profiles_align_with_schemas() {
        for id in DiseaseId::all() {
            let spec = SynthSpec::new(5, 3, 1.0, 0.5).unwrap();
            let table = synthesize(id, &spec).unwrap();
            assert_eq!(table.n_rows(), 5);
            assert_eq!(table.n_cols(), builtin_schema(id).len());
            // Synthetic targets are numeric binary.
            let target = table.schema().target_index();
            for row in table.rows() {
                let v = row[target].as_number().unwrap();
                assert!(v == 0.0 || v == 1.0);
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(SynthSpec::new(0, 1, 0.5, 0.5).is_err());
        assert!(SynthSpec::new(10, 1, 1.5, 0.5).is_err());
        assert!(SynthSpec::new(10, 1, 0.5, 0.0).is_err());
        assert!(SynthSpec::new(10, 1, 0.5, 1.0).is_err());
    }

    #[test]
    fn positive_rate_respected() {
        let spec = SynthSpec::new(20_000, 9, 0.0, 0.1).unwrap();
        let table = synthesize(DiseaseId::Diabetes, &spec).unwrap();
        let target = table.schema().target_index();
        let positives = table
            .rows()
            .iter()
            .filter(|r| r[target].as_number() == Some(1.0))
            .count();
        let rate = positives as f64 / 20_000.0;
        assert!((rate - 0.1).abs() < 0.01, "rate {rate}");
    }
}
