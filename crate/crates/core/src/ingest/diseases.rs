//! Built-in schemas for the four supported disease datasets.

use std::fmt;
use std::str::FromStr;

use crate::data::{ColumnKind, ColumnRole, ColumnSpec, Schema};
use crate::error::{Error, Result};

/// The four supported prediction tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiseaseId {
    Heart,
    Thyroid,
    Diabetes,
    Ckd,
}

impl DiseaseId {
    pub fn all() -> [DiseaseId; 4] {
        [
            DiseaseId::Heart,
            DiseaseId::Thyroid,
            DiseaseId::Diabetes,
            DiseaseId::Ckd,
        ]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DiseaseId::Heart => "heart",
            DiseaseId::Thyroid => "thyroid",
            DiseaseId::Diabetes => "diabetes",
            DiseaseId::Ckd => "ckd",
        }
    }
}

impl fmt::Display for DiseaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DiseaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heart" => Ok(DiseaseId::Heart),
            "thyroid" => Ok(DiseaseId::Thyroid),
            "diabetes" => Ok(DiseaseId::Diabetes),
            "ckd" => Ok(DiseaseId::Ckd),
            other => Err(Error::config(
                "disease",
                format!("unknown disease id `{other}`; valid ids: heart, thyroid, diabetes, ckd"),
            )),
        }
    }
}

fn num(name: &str, role: ColumnRole, desc: &str) -> ColumnSpec {
    ColumnSpec::new(name, ColumnKind::Numeric, role, desc)
}

fn cat(name: &str, role: ColumnRole, desc: &str) -> ColumnSpec {
    ColumnSpec::new(name, ColumnKind::Categorical, role, desc)
}

/// The built-in schema for a disease, with roles assigned: the target column
/// is marked, identifier columns are excluded from features.
///
/// Heart keeps the source file's full 14-column layout; the three columns the
/// source documentation leaves out of the modeling description (`fbs`,
/// `restecg`, `exang`) are carried with role `excluded` so files parse intact
/// while the default feature set matches the documented one.
///
/// The CKD schema is reconstructed from a narrative attribute listing; its
/// snake_case names are this project's own.
pub fn builtin_schema(id: DiseaseId) -> Schema {
    use ColumnRole::*;
    let columns = match id {
        DiseaseId::Heart => vec![
            num("age", Feature, "age, years"),
            num("sex", Feature, "sex (1 male, 0 female)"),
            num("cp", Feature, "chest pain type (0-3)"),
            num("trestbps", Feature, "resting blood pressure, mm Hg"),
            num("chol", Feature, "serum cholesterol, mg/dl"),
            num("fbs", Excluded, "fasting blood sugar > 120 mg/dl"),
            num("restecg", Excluded, "resting electrocardiographic result (0-2)"),
            num("thalach", Feature, "maximum heart rate achieved, bpm"),
            num("exang", Excluded, "exercise-induced angina"),
            num("oldpeak", Feature, "ST depression induced by exercise relative to rest"),
            num("slope", Feature, "slope of the peak exercise ST segment (0-2)"),
            num("ca", Feature, "major vessels colored by fluoroscopy (0-4)"),
            cat("thal", Feature, "thalassemia level"),
            num("target", Target, "heart disease present (1) or absent (0)"),
        ],
        DiseaseId::Thyroid => vec![
            num("age", Feature, "age, years"),
            cat("sex", Feature, "sex (M or F)"),
            cat("on_thyroxine", Feature, "on thyroxine treatment"),
            cat("query_on_thyroxine", Feature, "possibly on thyroxine"),
            cat("on_antithyroid_meds", Feature, "on antithyroid medication"),
            cat("sick", Feature, "currently sick"),
            cat("pregnant", Feature, "pregnant"),
            cat("thyroid_surgery", Feature, "history of thyroid surgery"),
            cat("I131_treatment", Feature, "history of I131 treatment"),
            cat("query_hypothyroid", Feature, "suspected hypothyroid"),
            cat("query_hyperthyroid", Feature, "suspected hyperthyroid"),
            cat("lithium", Feature, "on lithium"),
            cat("goitre", Feature, "goitre present"),
            cat("tumor", Feature, "tumor present"),
            cat("psych", Feature, "psychiatric condition"),
            cat("TSH_measured", Feature, "TSH level was measured"),
            num("TSH", Feature, "thyroid-stimulating hormone, mIU/L"),
            cat("T3_measured", Feature, "T3 level was measured"),
            num("T3", Feature, "triiodothyronine, nmol/L"),
            cat("TT4_measured", Feature, "TT4 level was measured"),
            num("TT4", Feature, "total thyroxine, nmol/L"),
            cat("T4U_measured", Feature, "T4U was measured"),
            num("T4U", Feature, "thyroxine uptake ratio"),
            cat("FTI_measured", Feature, "FTI was measured"),
            num("FTI", Feature, "free thyroxine index"),
            cat("TBG_measured", Feature, "TBG was measured"),
            num("TBG", Feature, "thyroxine-binding globulin, mg/L"),
            cat("referral_source", Feature, "referring institution"),
            cat("target", Target, "diagnosis label"),
            num("patient_id", Identifier, "unique patient identifier"),
        ],
        DiseaseId::Diabetes => vec![
            num("age", Feature, "age, years"),
            cat("gender", Feature, "gender"),
            num("glucose_level", Feature, "blood glucose level, mg/dl"),
            num("hypertension", Feature, "hypertension present (1) or absent (0)"),
            num("heart_disease", Feature, "cardiovascular disease present (1) or absent (0)"),
            num("bmi", Feature, "body mass index, kg/m^2"),
            cat("smoking_history", Feature, "smoking history"),
            num("diabetes", Target, "diabetic (1) or not (0)"),
        ],
        DiseaseId::Ckd => vec![
            num("patient_id", Identifier, "unique patient identifier"),
            num("age", Feature, "age, years"),
            cat("sex", Feature, "sex (M or F)"),
            cat("ethnicity", Feature, "ethnicity group"),
            num("socioeconomic_status", Feature, "socioeconomic status score (1-3)"),
            num("education_level", Feature, "educational attainment level (1-4)"),
            num("bmi", Feature, "body mass index, kg/m^2"),
            num("smoking", Feature, "current smoker (1) or not (0)"),
            num("alcohol_use", Feature, "regular alcohol use (1) or not (0)"),
            num("physical_activity", Feature, "weekly activity score (0-10)"),
            num("diet_quality", Feature, "diet quality score (0-10)"),
            num("sleep_quality", Feature, "sleep quality score (0-10)"),
            num("family_kidney_disease", Feature, "family history of kidney disease"),
            num("family_hypertension", Feature, "family history of hypertension"),
            num("family_diabetes", Feature, "family history of diabetes"),
            num("systolic_bp", Feature, "systolic blood pressure, mm Hg"),
            num("diastolic_bp", Feature, "diastolic blood pressure, mm Hg"),
            num("blood_glucose", Feature, "fasting blood glucose, mg/dl"),
            num("hba1c", Feature, "hemoglobin A1c, percent"),
            num("serum_creatinine", Feature, "serum creatinine, mg/dl"),
            num("gfr", Feature, "glomerular filtration rate, mL/min/1.73m^2"),
            num("urine_protein", Feature, "urine protein level (0-4)"),
            num("serum_sodium", Feature, "serum sodium, mmol/L"),
            num("serum_potassium", Feature, "serum potassium, mmol/L"),
            num("cholesterol_total", Feature, "total cholesterol, mg/dl"),
            num("acei_use", Feature, "ACE-inhibitor use"),
            num("diuretic_use", Feature, "diuretic use"),
            num("statin_use", Feature, "statin use"),
            num("nsaid_use", Feature, "regular NSAID use"),
            num("antidiabetic_use", Feature, "antidiabetic medication use"),
            num("edema", Feature, "edema present"),
            num("fatigue", Feature, "persistent fatigue"),
            num("nausea", Feature, "recurrent nausea"),
            num("muscle_cramps", Feature, "muscle cramps"),
            num("pruritus", Feature, "itching"),
            num("quality_of_life", Feature, "quality-of-life score (0-10)"),
            num("heavy_metal_exposure", Feature, "heavy metal exposure"),
            num("chemical_exposure", Feature, "occupational chemical exposure"),
            num("water_quality", Feature, "poor drinking water quality"),
            num("medical_visits", Feature, "medical visits per year"),
            num("treatment_adherence", Feature, "treatment adherence score (0-10)"),
            num("health_literacy", Feature, "health literacy score (0-10)"),
            num("diagnosis", Target, "chronic kidney disease present (1) or absent (0)"),
        ],
    };
    Schema::new(columns).expect("builtin schemas are valid")
}

/// Default positive-class share used by the synthesizer.
pub fn default_positive_rate(id: DiseaseId) -> f64 {
    match id {
        DiseaseId::Heart => 0.5,
        // 268 positives out of 2,718 evaluated rows.
        DiseaseId::Thyroid => 268.0 / 2718.0,
        DiseaseId::Diabetes => 0.085,
        DiseaseId::Ckd => 0.42,
    }
}

/// Raw diagnosis tokens mapped to 1 when binarizing the thyroid target.
pub fn thyroid_positive_labels() -> Vec<String> {
    vec!["hypothyroid".to_string(), "hyperthyroid".to_string()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heart_has_14_columns_with_thal_categorical() {
        let schema = builtin_schema(DiseaseId::Heart);
        assert_eq!(schema.len(), 14);
        assert_eq!(schema.target().name, "target");
        let thal = schema.column(schema.index_of("thal").unwrap());
        assert_eq!(thal.kind, ColumnKind::Categorical);
        let numeric_features = schema
            .feature_indices()
            .iter()
            .filter(|&&i| schema.column(i).kind == ColumnKind::Numeric)
            .count();
        assert_eq!(numeric_features, 9);
    }

    #[test]
    fn heart_feature_order_matches_documented_set() {
        let schema = builtin_schema(DiseaseId::Heart);
        let names: Vec<&str> = schema
            .feature_indices()
            .iter()
            .map(|&i| schema.column(i).name.as_str())
            .collect();
        assert_eq!(
            names,
            ["age", "sex", "cp", "trestbps", "chol", "thalach", "oldpeak", "slope", "ca", "thal"]
        );
    }

    #[test]
    fn thyroid_has_30_columns() {
        let schema = builtin_schema(DiseaseId::Thyroid);
        assert_eq!(schema.len(), 30);
        assert_eq!(schema.target().name, "target");
        assert_eq!(schema.target().kind, ColumnKind::Categorical);
        let pid = schema.column(schema.index_of("patient_id").unwrap());
        assert_eq!(pid.role, ColumnRole::Identifier);
        for name in ["TSH", "T3", "TT4", "T4U", "FTI", "TBG", "referral_source"] {
            assert!(schema.index_of(name).is_ok(), "missing {name}");
        }
    }

    #[test]
    fn diabetes_target_is_diabetes() {
        let schema = builtin_schema(DiseaseId::Diabetes);
        assert_eq!(schema.target().name, "diabetes");
        for name in ["age", "gender", "glucose_level", "hypertension", "heart_disease", "bmi", "smoking_history"] {
            assert!(schema.index_of(name).is_ok(), "missing {name}");
        }
    }

    #[test]
    fn every_schema_validates() {
        for id in DiseaseId::all() {
            let schema = builtin_schema(id);
            assert!(!schema.is_empty());
            assert_eq!(schema.export().lines().count(), schema.len());
        }
    }

    #[test]
    fn id_round_trips_through_str() {
        for id in DiseaseId::all() {
            assert_eq!(id.as_str().parse::<DiseaseId>().unwrap(), id);
        }
        assert!("lung".parse::<DiseaseId>().is_err());
    }
}
