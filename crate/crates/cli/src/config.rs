use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use zeroset::experiments::SweepConfig;
use zeroset::geometry::{Region, ZeroSet};

use crate::CliError;

pub const SCHEMA: &str = include_str!("../schema/config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleArgs {
    pub model: String,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SampleArgs {
    fn default() -> Self {
        SampleArgs {
            model: "powerlaw4_segment".into(),
            n: 1_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverArgs {
    pub model: Option<String>,
    pub zero_set: Option<ZeroSet>,
    pub region: Option<Region>,
    pub r: f64,
    pub eps: f64,
}

impl Default for CoverArgs {
    fn default() -> Self {
        CoverArgs {
            model: Some("powerlaw4_segment".into()),
            zero_set: None,
            region: None,
            r: 0.05,
            eps: 0.2,
        }
    }
}

fn default_eta() -> f64 {
    0.21
}

fn default_psi() -> f64 {
    0.01
}

fn default_multiplier() -> f64 {
    0.4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectArgs {
    pub model: String,
    pub n: u64,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_psi")]
    pub psi: f64,
    #[serde(rename = "M_r", default = "default_multiplier")]
    pub m_r: f64,
    #[serde(rename = "M_eps", default = "default_multiplier")]
    pub m_eps: f64,
    pub region: Option<Region>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for DetectArgs {
    fn default() -> Self {
        DetectArgs {
            model: "powerlaw4_segment".into(),
            n: 10_000,
            eta: default_eta(),
            psi: default_psi(),
            m_r: default_multiplier(),
            m_eps: default_multiplier(),
            region: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatmapArgs {
    pub models: Vec<String>,
    pub n: usize,
    pub bins: usize,
    pub seed: u64,
}

impl Default for HeatmapArgs {
    fn default() -> Self {
        HeatmapArgs {
            models: vec!["f_quadratic".into(), "g_twobumps".into(), "h_parabolic".into()],
            n: 10_000,
            bins: 100,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentArgs {
    pub d0: usize,
    pub upper: f64,
    pub lower: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RatesArgs {
    pub d: usize,
    pub eta: f64,
    pub psi: f64,
    pub xi: Option<f64>,
    #[serde(rename = "M_r")]
    pub m_r: f64,
    #[serde(rename = "M_eps")]
    pub m_eps: f64,
    pub components: Vec<ComponentArgs>,
}

impl Default for RatesArgs {
    fn default() -> Self {
        RatesArgs {
            d: 2,
            eta: default_eta(),
            psi: default_psi(),
            xi: None,
            m_r: default_multiplier(),
            m_eps: default_multiplier(),
            components: vec![ComponentArgs {
                d0: 1,
                upper: 4.0,
                lower: 4.0,
            }],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSupportArgs {
    pub model: String,
    #[serde(default = "default_tail_eta")]
    pub eta: f64,
    #[serde(default = "default_tail_xi")]
    pub xi: f64,
    #[serde(rename = "M_delta", default = "default_m_delta")]
    pub m_delta: f64,
    pub ns: Vec<u64>,
}

fn default_tail_eta() -> f64 {
    0.3
}

fn default_tail_xi() -> f64 {
    0.1
}

fn default_m_delta() -> f64 {
    zeroset::noncompact::DEFAULT_M_DELTA
}

impl Default for TailSupportArgs {
    fn default() -> Self {
        TailSupportArgs {
            model: "polytail_1_3".into(),
            eta: default_tail_eta(),
            xi: default_tail_xi(),
            m_delta: default_m_delta(),
            ns: vec![1_000, 10_000, 100_000, 1_000_000],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxdimArgs {
    pub model: Option<String>,
    pub zero_set: Option<ZeroSet>,
    pub deltas: Vec<f64>,
}

impl Default for BoxdimArgs {
    fn default() -> Self {
        BoxdimArgs {
            model: Some("powerlaw4_segment".into()),
            zero_set: None,
            deltas: vec![0.05, 0.025, 0.0125, 0.00625],
        }
    }
}

/// Parsed configuration file; payloads stay optional until a subcommand picks one.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub sample: Option<SampleArgs>,
    pub cover: Option<CoverArgs>,
    pub detect: Option<DetectArgs>,
    pub sweep: Option<SweepConfig>,
    pub heatmap: Option<HeatmapArgs>,
    pub rates_check: Option<RatesArgs>,
    pub tail_support: Option<TailSupportArgs>,
    pub boxdim: Option<BoxdimArgs>,
}

/// Schema errors, one per line, or Ok.
pub fn validate_against_schema(instance: &Value) -> Result<(), CliError> {
    let schema: Value = serde_json::from_str(SCHEMA).expect("bundled schema is valid JSON");
    let validator = jsonschema::validator_for(&schema).expect("bundled schema compiles");
    let problems: Vec<String> = validator
        .iter_errors(instance)
        .map(|e| format!("{} at '{}'", e, e.instance_path()))
        .collect();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(problems.join("; ")))
    }
}

pub fn load(path: Option<&Path>) -> Result<RunConfig, CliError> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("config {} is not valid JSON: {e}", path.display())))?;
    validate_against_schema(&value)?;
    serde_json::from_value(value).map_err(|e| CliError::Validation(format!("config: {e}")))
}
