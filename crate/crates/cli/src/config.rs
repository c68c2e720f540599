//! Run configuration file (TOML). Every key is optional; command-line flags
//! take precedence over the file, the file over built-in defaults.

use std::path::{Path, PathBuf};

use oncograph::ingest::{ClinicalSchema, DrugTargetSchema, GdaSchema, MutationSchema, TreatmentSchema};
use oncograph::rational::parse_decimal;
use oncograph::Rational;
use serde::Deserialize;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "ONCOGRAPH_CONFIG";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory holding `mutations.tsv`, `clinical.tsv`, `gda.tsv`,
    /// `drugs.tsv` and optionally `treatments.tsv`.
    pub data_dir: Option<PathBuf>,
    pub mutations: Option<PathBuf>,
    pub clinical: Option<PathBuf>,
    pub gda: Option<PathBuf>,
    pub drugs: Option<PathBuf>,
    pub treatments: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,

    pub gda_threshold: Option<Number>,
    pub granularity: Option<String>,
    pub t_long: Option<u32>,
    pub t_short: Option<u32>,
    pub metric: Option<String>,
    /// Distance threshold for `cohort groups`.
    pub group_k: Option<Number>,
    /// Support percentage for `coexist`.
    pub coexist_k: Option<Number>,
    pub top_n: Option<usize>,
    pub expand_gene_associations: Option<bool>,

    pub columns: Columns,
}

/// A number written either bare or quoted. Floats are read back through
/// their shortest decimal rendering so `0.8` means exactly 4/5.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational, String> {
        let text = match self {
            Number::Int(i) => i.to_string(),
            Number::Float(f) => f.to_string(),
            Number::Text(s) => s.clone(),
        };
        parse_decimal(&text).map_err(|e| e.to_string())
    }
}

/// Header names, for exports whose columns differ from the defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Columns {
    pub mutations: MutationColumns,
    pub clinical: ClinicalColumns,
    pub gda: GdaColumns,
    pub drugs: DrugColumns,
    pub treatments: TreatmentColumns,
}

macro_rules! column_overrides {
    ($name:ident => $schema:ty { $($field:ident),* $(,)? }) => {
        #[derive(Debug, Clone, Default, Deserialize)]
        #[serde(default, deny_unknown_fields)]
        pub struct $name {
            $(pub $field: Option<String>,)*
        }

        impl $name {
            pub fn schema(&self) -> $schema {
                let mut schema = <$schema>::default();
                $(if let Some(v) = &self.$field {
                    schema.$field = v.clone();
                })*
                schema
            }
        }
    };
}

column_overrides!(MutationColumns => MutationSchema { sample_id, gene, chromosome, start, end, vaf });
column_overrides!(ClinicalColumns => ClinicalSchema { sample_id, cancer_type, os_months, os_status });
column_overrides!(GdaColumns => GdaSchema { gene, disease, gda_score });
column_overrides!(DrugColumns => DrugTargetSchema { drug, gene, weight, adverse_effects });
column_overrides!(TreatmentColumns => TreatmentSchema { sample_id, drug_id, order, effectiveness });

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut config: RunConfig =
            toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        // Relative paths are relative to the config file.
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut config.data_dir,
            &mut config.mutations,
            &mut config.clinical,
            &mut config.gda,
            &mut config.drugs,
            &mut config.treatments,
            &mut config.out_dir,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }
}
